#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "prophetmatch/instances.hpp"
#include "prophetmatch/sampling.hpp"

using namespace pm;

namespace {

Instance single_edge_instance(const Rat& w, const Rat& p) {
    Graph g = make_graph(2, {{0, 1}});
    return make_instance(g, edge_arrival({0}), {two_point(w, p)});
}

// Distribution of R_t by direct enumeration of (observed, resampled) pairs,
// independent of the scheme builder.
std::map<ElemMask, Rat> brute_realization_dist(const Instance& inst, int t) {
    std::map<ElemMask, Rat> out;
    ElemMask bmask = 0;
    for (int e : inst.batches[t]) bmask |= ElemMask(1) << e;
    for_each_joint_atom(inst, 1'000'000,
                        [&](const std::vector<int>&, const Rat& p, const Weights& w) {
                            out[instance_opt(inst, w).edges & bmask] += p;
                        });
    return out;
}

}  // namespace

TEST_CASE("sample_weights on a deterministic instance returns the unique assignment") {
    Graph g = make_graph(3, {{0, 1}, {1, 2}});
    Instance inst = make_instance(
        g, edge_arrival({0, 1}), {point_mass({Rat(4)}), point_mass({Rat(9, 2)})});
    RngStream rng = stream_for(5, 0, 0);
    SampledWeights sw = sample_weights(inst, rng);
    CHECK(sw.w[0] == 4);
    CHECK(sw.w[1] == Rat(9, 2));
}

TEST_CASE("sample_weights frequencies match atom probabilities") {
    Instance inst = single_edge_instance(Rat(1, 2), Rat(1, 2));
    uint64_t hits = 0;
    const uint64_t n = 200000;
    for (uint64_t trial = 0; trial < n; ++trial) {
        RngStream rng = stream_for(11, trial, 0);
        SampledWeights sw = sample_weights(inst, rng);
        if (sw.w[0] == Rat(1, 2)) ++hits;
    }
    double p = double(hits) / double(n);
    // 3 sigma around 1/2 at n = 2e5 is about 0.0034.
    CHECK(p > 0.4966);
    CHECK(p < 0.5034);
}

TEST_CASE("bad-example: weight marginals keep Pr[w3 = 1] = 1/2") {
    Instance inst = bad_ocrs_example(Rat(1, 1000000));
    auto margs = inst.element_marginals();
    Rat p1 = 0;
    for (auto& [w, p] : margs[2].support)
        if (w == 1) p1 += p;
    CHECK(p1 == Rat(1, 2));
}

TEST_CASE("bad-example: realization distributions match the published ones") {
    Instance inst = bad_ocrs_example(Rat(1, 1000000));
    // Batch 1 realizes {1} w.p. 3/8, {2} w.p. 3/8, nothing w.p. 1/4;
    // batch 2 realizes {3} w.p. 3/8, {4} w.p. 3/8, both w.p. 1/4.
    auto r1 = brute_realization_dist(inst, 0);
    CHECK(r1[0b0001] == Rat(3, 8));
    CHECK(r1[0b0010] == Rat(3, 8));
    CHECK(r1[0] == Rat(1, 4));
    auto r2 = brute_realization_dist(inst, 1);
    CHECK(r2[0b0100] == Rat(3, 8));
    CHECK(r2[0b1000] == Rat(3, 8));
    CHECK(r2[0b1100] == Rat(1, 4));

    // The scheme builder agrees.
    IntegralScheme scheme = exact_opt_scheme(inst);
    std::map<ElemMask, Rat> s1;
    for (const SchemeAtom& a : scheme.atoms[0]) s1[a.realized] += a.prob;
    CHECK(s1 == r1);

    // Sampled realizations agree with the exact law.
    uint64_t count1 = 0, count_none = 0;
    const uint64_t n = 100000;
    for (uint64_t trial = 0; trial < n; ++trial) {
        RngStream rng = stream_for(13, trial, 0);
        int atom = inst.dists[0].sample(rng);
        ElemMask r = realize_opt_batch(inst, 0, atom, rng);
        if (r == 0b0001) ++count1;
        if (r == 0) ++count_none;
    }
    CHECK(double(count1) / n == doctest::Approx(0.375).epsilon(0.02));
    CHECK(double(count_none) / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("bad-example: exact marginals are (3/8, 3/8, 5/8, 5/8)") {
    Instance inst = bad_ocrs_example(Rat(1, 1000000));
    auto x = exact_marginals(inst, MarginalMode::Opt);
    CHECK(x[0] == Rat(3, 8));
    CHECK(x[1] == Rat(3, 8));
    CHECK(x[2] == Rat(5, 8));
    CHECK(x[3] == Rat(5, 8));
}

TEST_CASE("marginal identity: R_t has the distribution of OPT(w) intersected with B_t") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        RandomInstanceParams p;
        p.n_vertices = 4 + static_cast<int>(seed % 3);
        p.arrival = seed % 2 ? ArrivalKind::VertexArrival : ArrivalKind::EdgeArrival;
        p.correlated_batches = seed % 3 == 0;
        p.max_joint_support = 3000;
        Instance inst = random_instance(p, 7000 + seed);
        IntegralScheme scheme = exact_opt_scheme(inst);
        for (int t = 0; t < inst.num_batches(); ++t) {
            auto brute = brute_realization_dist(inst, t);
            std::map<ElemMask, Rat> mine;
            for (const SchemeAtom& a : scheme.atoms[t]) mine[a.realized] += a.prob;
            CHECK(mine == brute);
        }
        // Vertex arrival: every realized set has at most one edge.
        if (inst.arrival.kind == ArrivalKind::VertexArrival)
            CHECK(scheme.max_realized_size() <= 1);
        // Marginals land in the degree polytope.
        std::vector<Rat> load(inst.graph.vertex_count, Rat(0));
        for (int e = 0; e < inst.graph.edge_count(); ++e) {
            load[inst.graph.edges[e].u] += scheme.marginals[e];
            load[inst.graph.edges[e].v] += scheme.marginals[e];
        }
        for (const Rat& l : load) CHECK(l <= 1);
    }
}

TEST_CASE("single-batch instance realizes OPT exactly") {
    Graph g = make_graph(4, {{0, 1}, {2, 3}});
    JointDistribution d;
    d.atoms.push_back({{Rat(3), Rat(5)}, Rat(1, 2)});
    d.atoms.push_back({{Rat(2), Rat(0)}, Rat(1, 2)});
    Instance inst = make_instance(g, explicit_batches({{0, 1}}), {d});
    RngStream rng = stream_for(3, 0, 0);
    CHECK(realize_opt_batch(inst, 0, 0, rng) == 0b11);
    CHECK(realize_opt_batch(inst, 0, 1, rng) == 0b01);
}

TEST_CASE("fractional realizations on the unit triangle") {
    Graph g = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    std::vector<Marginal> margs(3);
    for (auto& m : margs) m.support = {{Rat(1), Rat(1)}};
    Instance inst = make_independent_instance(g, vertex_arrival({0, 1, 2}), margs);
    // Last batch carries (ac),(bc); f-OPT of the unit triangle is all halves.
    RngStream rng = stream_for(21, 0, 0);
    auto r = realize_fopt_batch(inst, 2, 0, rng);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Rat(1, 2));
    CHECK(r[1] == Rat(1, 2));

    FractionalScheme scheme = exact_fopt_scheme(inst);
    CHECK(scheme.marginals[0] == Rat(1, 2));
    CHECK(scheme.marginals[1] == Rat(1, 2));
    CHECK(scheme.marginals[2] == Rat(1, 2));
    // Per-batch fractional realizations sum to at most 1.
    for (const auto& batch : scheme.atoms)
        for (const FracSchemeAtom& a : batch) {
            Rat sum = 0;
            for (const Rat& v : a.r) sum += v;
            CHECK(sum <= 1);
        }
}

TEST_CASE("deterministic single edge realizes fractionally at 1") {
    Instance inst = single_edge_instance(Rat(7), Rat(1));
    FractionalScheme scheme = exact_fopt_scheme(inst);
    REQUIRE(scheme.atoms[0].size() == 1);
    CHECK(scheme.atoms[0][0].r[0] == 1);
}

TEST_CASE("mc marginals track exact marginals") {
    Instance inst = bad_ocrs_example(Rat(1, 1000000));
    McMarginals mc = mc_marginals(inst, MarginalMode::Opt, 200000, 99);
    CHECK(mc.x[2] == doctest::Approx(0.625).epsilon(0.004));
    CHECK(mc.x[0] == doctest::Approx(0.375).epsilon(0.006));

    for (uint64_t seed = 0; seed < 6; ++seed) {
        RandomInstanceParams p;
        p.n_vertices = 5;
        p.arrival = ArrivalKind::EdgeArrival;
        Instance ri = random_instance(p, 500 + seed);
        auto exact = exact_marginals(ri, MarginalMode::Opt);
        McMarginals est = mc_marginals(ri, MarginalMode::Opt, 100000, 7 + seed);
        for (std::size_t e = 0; e < exact.size(); ++e) {
            double sigma = est.ci_halfwidth[e] / 1.959963984540054;
            CHECK(std::abs(est.x[e] - rat_d(exact[e])) <= 5 * sigma + 1e-9);
        }
    }

    // Determinism under a fixed seed.
    McMarginals again = mc_marginals(inst, MarginalMode::Opt, 200000, 99);
    CHECK(again.x == mc.x);
}

TEST_CASE("ex-ante realization hits each edge with probability y") {
    Instance inst = fig1b_ex_ante_gadget(Rat(1, 100));
    ExAnteSolution sol = instance_ex_ante(inst);
    IntegralScheme scheme = ex_ante_scheme(inst, sol);
    for (int e = 0; e < inst.num_elements(); ++e) CHECK(scheme.marginals[e] == sol.y[e]);

    // The threshold rule: y = 1 means always realized.
    Graph single = make_graph(2, {{0, 1}});
    Marginal half;
    half.support = {{Rat(1), Rat(1, 2)}, {Rat(0), Rat(1, 2)}};
    ExAnteSolution s = ex_ante_opt(single, {half});
    REQUIRE(s.y[0] == 1);
    CHECK(ex_ante_realize(single, {Rat(0)}, s) == 0b1);
    CHECK(ex_ante_realize(single, {Rat(1)}, s) == 0b1);

    // Big edges of fig 1b are realized with probability eps under the coin
    // rule (their tail has no split).
    int big = inst.batches[6][0];
    CHECK(sol.y[big] == Rat(1, 100));
    uint64_t hits = 0;
    const uint64_t n = 200000;
    for (uint64_t trial = 0; trial < n; ++trial) {
        RngStream rng = stream_for(31, trial, 0);
        SampledWeights sw = sample_weights(inst, rng);
        ElemMask r = ex_ante_realize(inst.graph, sw.w, sol, rng);
        if ((r >> big) & 1) ++hits;
    }
    CHECK(double(hits) / n == doctest::Approx(0.01).epsilon(0.15));
}

TEST_CASE("joint support cap raises a capacity error") {
    RandomInstanceParams p;
    p.n_vertices = 6;
    p.support_size = 3;
    p.max_joint_support = 20000;
    Instance inst = random_instance(p, 42);
    CHECK_THROWS_AS(exact_marginals(inst, MarginalMode::Opt, 2), CapacityError);
}
