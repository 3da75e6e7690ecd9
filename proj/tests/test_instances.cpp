#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prophetmatch/instances.hpp"
#include "prophetmatch/prophet.hpp"

using namespace pm;

TEST_CASE("fig 1a construction") {
    Rat eps(1, 1000);
    Instance inst = fig1a_two_triangles(eps);
    CHECK(inst.graph.vertex_count == 6);
    CHECK(inst.graph.edge_count() == 15);
    CHECK(inst.arrival.kind == ArrivalKind::EdgeArrival);
    // Six fixed edges arrive first, deterministically worth 1.
    for (int t = 0; t < 6; ++t) {
        REQUIRE(inst.dists[t].atoms.size() == 1);
        CHECK(inst.dists[t].atoms[0].weights[0] == 1);
    }
    // Cross edges carry 1/(4 eps) with probability eps.
    for (int t = 6; t < 15; ++t) {
        REQUIRE(inst.dists[t].atoms.size() == 2);
        CHECK(inst.dists[t].atoms[0].weights[0] == Rat(250));
        CHECK(inst.dists[t].atoms[0].prob == eps);
    }
    CHECK_THROWS_AS(fig1a_two_triangles(Rat(1, 4)), std::domain_error);
}

TEST_CASE("fig 1a values converge to the published limits") {
    // |measured - limit| shrinks (weakly) as eps decreases. The online value
    // sits at exactly 9/4 for every eps: two fixed edges plus the one
    // remaining big-edge chance worth eps * 1/(4 eps) = 1/4.
    std::vector<Rat> epses = {Rat(1, 100), Rat(1, 1000), Rat(1, 10000)};
    std::vector<Rat> fgaps, ongaps;
    for (const Rat& eps : epses) {
        Instance inst = fig1a_two_triangles(eps);
        fgaps.push_back(rat_abs(expected_fopt_value(inst) - Rat(21, 4)));
        ongaps.push_back(rat_abs(optimal_online_value(inst) - Rat(9, 4)));
    }
    CHECK(fgaps[1] < fgaps[0]);
    CHECK(fgaps[2] < fgaps[1]);
    CHECK(ongaps[1] <= ongaps[0]);
    CHECK(ongaps[2] <= ongaps[1]);
    CHECK(ongaps[2] == 0);
}

TEST_CASE("fig 1b construction and ex-ante structure") {
    Rat eps(1, 1000);
    Instance inst = fig1b_ex_ante_gadget(eps);
    CHECK(inst.graph.vertex_count == 6);
    CHECK(inst.graph.edge_count() == 15);
    // First six arrivals are the triangle edges at weight 1 w.p. 1/2.
    for (int t = 0; t < 6; ++t) {
        REQUIRE(inst.dists[t].atoms.size() == 2);
        CHECK(inst.dists[t].atoms[0].weights[0] == 1);
        CHECK(inst.dists[t].atoms[0].prob == Rat(1, 2));
    }
    // Big edges carry 15/(62 eps) with probability eps.
    for (int t = 6; t < 15; ++t) {
        CHECK(inst.dists[t].atoms[0].weights[0] == Rat(15) / (62 * eps));
        CHECK(inst.dists[t].atoms[0].prob == eps);
    }
}

TEST_CASE("bad example construction") {
    Instance inst = bad_ocrs_example(Rat(1, 1000000));
    REQUIRE(inst.family_mode());
    CHECK(inst.family->ground == 4);
    CHECK(inst.batches[0] == std::vector<int>{0, 1});
    CHECK(inst.batches[1] == std::vector<int>{2, 3});
    // {1,2} (indices 0,1) is infeasible, every other pair is feasible.
    CHECK(!inst.family->contains(0b0011));
    CHECK(inst.family->contains(0b1100));
    CHECK_THROWS_AS(bad_ocrs_example(Rat(1, 2)), std::domain_error);
}

TEST_CASE("random instances are reproducible and respect caps") {
    RandomInstanceParams p;
    p.n_vertices = 6;
    p.support_size = 3;
    Instance a = random_instance(p, 31337);
    Instance b = random_instance(p, 31337);
    CHECK(instance_to_json(a) == instance_to_json(b));
    CHECK(a.joint_support_size() <= p.max_joint_support);
    CHECK(a.graph.edge_count() <= p.max_edges);

    Instance c = random_instance(p, 31338);
    CHECK(instance_to_json(a) != instance_to_json(c));

    // Zero edge probability produces the empty graph with zero optimum.
    RandomInstanceParams z;
    z.n_vertices = 4;
    z.edge_prob = Rat(0);
    Instance zero = random_instance(z, 1);
    CHECK(zero.graph.edge_count() == 0);
    CHECK(expected_opt_value(zero) == 0);
}

TEST_CASE("random instance marginals live in the degree polytope") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        RandomInstanceParams p;
        p.n_vertices = 5;
        p.arrival = seed % 2 ? ArrivalKind::VertexArrival : ArrivalKind::EdgeArrival;
        p.correlated_batches = seed % 3 == 0;
        p.max_joint_support = 3000;
        Instance inst = random_instance(p, 600 + seed);
        auto x = exact_marginals(inst, MarginalMode::Opt);
        std::vector<Rat> load(inst.graph.vertex_count, Rat(0));
        for (int e = 0; e < inst.graph.edge_count(); ++e) {
            load[inst.graph.edges[e].u] += x[e];
            load[inst.graph.edges[e].v] += x[e];
        }
        for (const Rat& l : load) CHECK(l <= 1);
    }
}

TEST_CASE("builders round-trip through json") {
    for (const std::string& name : {"fig1a", "fig1b", "bad-ocrs"}) {
        Instance inst = instance_by_name(name, Rat(1, 1000));
        Instance back = instance_from_json(instance_to_json(inst));
        CHECK(instance_to_json(back) == instance_to_json(inst));
    }
    CHECK_THROWS_AS(instance_by_name("nope", Rat(1, 1000)), std::domain_error);
}

TEST_CASE("named instances resolve") {
    CHECK(instance_by_name("random", Rat(1, 1000), 5).graph.vertex_count == 6);
}
