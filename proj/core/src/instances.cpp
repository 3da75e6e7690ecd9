#include "prophetmatch/instances.hpp"

#include <algorithm>

#include "prophetmatch/prophet.hpp"
#include "prophetmatch/rng.hpp"

namespace pm {

namespace {

// Six vertices a..f = 0..5; fixed edges inside the triangles, cross edges
// between them in lexicographic order.
std::vector<std::pair<int, int>> gadget_edges() {
    std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {0, 2},
                                              {3, 4}, {4, 5}, {3, 5}};
    for (int u = 0; u <= 2; ++u)
        for (int v = 3; v <= 5; ++v) edges.push_back({u, v});
    return edges;
}

void check_gadget_eps(const Rat& eps) {
    if (eps <= 0 || eps > Rat(1, 9))
        throw std::domain_error("gadget parameter must lie in (0, 1/9]");
}

}  // namespace

Instance fig1a_two_triangles(const Rat& eps) {
    check_gadget_eps(eps);
    Graph g = make_graph(6, gadget_edges());
    std::vector<int> order(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) order[e] = e;
    std::vector<JointDistribution> dists;
    Rat big = Rat(1) / (4 * eps);
    for (int e = 0; e < g.edge_count(); ++e) {
        if (e < 6) {
            dists.push_back(point_mass({Rat(1)}));
        } else {
            dists.push_back(two_point(big, eps));
        }
    }
    return make_instance(std::move(g), edge_arrival(order), std::move(dists));
}

Instance fig1b_ex_ante_gadget(const Rat& eps) {
    check_gadget_eps(eps);
    // Arrival: (ab),(bc),(ac), then (de),(ef),(df), then the big edges.
    Graph g = make_graph(6, gadget_edges());
    int ab = g.edge_index(0, 1), bc = g.edge_index(1, 2), ac = g.edge_index(0, 2);
    int de = g.edge_index(3, 4), ef = g.edge_index(4, 5), df = g.edge_index(3, 5);
    std::vector<int> order = {ab, bc, ac, de, ef, df};
    for (int e = 0; e < g.edge_count(); ++e)
        if (std::find(order.begin(), order.end(), e) == order.end()) order.push_back(e);
    Rat big = Rat(15) / (62 * eps);
    std::vector<JointDistribution> dists;
    for (int e : order) {
        if (e == ab || e == bc || e == ac || e == de || e == ef || e == df) {
            dists.push_back(two_point(Rat(1), Rat(1, 2)));
        } else {
            dists.push_back(two_point(big, eps));
        }
    }
    return make_instance(std::move(g), edge_arrival(order), std::move(dists));
}

Instance bad_ocrs_example(const Rat& eps) {
    if (eps <= 0 || eps > Rat(1, 100))
        throw std::domain_error("bad-example parameter must lie in (0, 1/100]");
    FeasibilityFamily family = downward_closure(
        4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    BatchStructure arrival = explicit_batches({{0, 1}, {2, 3}});

    // The published distributions are symmetric under swapping {1,2} or {3,4},
    // which leaves the max-weight set tied; a deterministic optimum would then
    // collapse the realization distribution away from the published one. The
    // perturbations below (tiny against eps) make every maximizer unique while
    // moving all published quantities by O(eps^2) at most.
    Rat eps_lo = eps * Rat(1023, 1024);
    Rat delta = eps * rat_pow2(-20);

    JointDistribution d1;
    d1.atoms.push_back({{eps, eps_lo}, Rat(1, 2)});
    d1.atoms.push_back({{eps_lo, eps}, Rat(1, 2)});

    JointDistribution d2;
    d2.atoms.push_back({{Rat(1), Rat(1)}, Rat(1, 4)});
    d2.atoms.push_back({{Rat(1), Rat(0)}, Rat(1, 4)});
    d2.atoms.push_back({{Rat(0), Rat(1)}, Rat(1, 4)});
    d2.atoms.push_back({{delta, Rat(0)}, Rat(1, 8)});
    d2.atoms.push_back({{Rat(0), delta}, Rat(1, 8)});

    return make_family_instance(std::move(family), std::move(arrival), {d1, d2});
}

namespace {

Rat random_prob64(RngStream& rng) {
    // 1/64 .. 64/64
    return rat(static_cast<long>(1 + rng.below(64)), 64);
}

Marginal random_marginal(RngStream& rng, int support_size) {
    // Distinct dyadic weights k/64 with k in [0, 128]; probabilities with
    // denominator 64 summing to 1.
    Marginal m;
    std::vector<Rat> weights;
    while (static_cast<int>(weights.size()) < support_size) {
        Rat w = rat(static_cast<long>(rng.below(129)), 64);
        if (std::find(weights.begin(), weights.end(), w) == weights.end())
            weights.push_back(w);
    }
    std::vector<long> cuts;
    for (int i = 0; i + 1 < support_size; ++i) cuts.push_back(1 + static_cast<long>(rng.below(63)));
    cuts.push_back(0);
    cuts.push_back(64);
    std::sort(cuts.begin(), cuts.end());
    for (int i = 0; i < support_size; ++i) {
        long mass = cuts[i + 1] - cuts[i];
        if (mass == 0) continue;
        m.support.push_back({weights[i], rat(mass, 64)});
    }
    if (m.support.empty()) m.support.push_back({weights[0], Rat(1)});
    return m;
}

JointDistribution random_joint(RngStream& rng, int arity, int support_size) {
    JointDistribution d;
    std::vector<std::vector<Rat>> atoms;
    while (static_cast<int>(atoms.size()) < support_size) {
        std::vector<Rat> w;
        for (int j = 0; j < arity; ++j) w.push_back(rat(static_cast<long>(rng.below(129)), 64));
        if (std::find(atoms.begin(), atoms.end(), w) == atoms.end()) atoms.push_back(std::move(w));
    }
    std::vector<long> cuts;
    for (int i = 0; i + 1 < support_size; ++i) cuts.push_back(1 + static_cast<long>(rng.below(63)));
    cuts.push_back(0);
    cuts.push_back(64);
    std::sort(cuts.begin(), cuts.end());
    for (int i = 0; i < support_size; ++i) {
        long mass = cuts[i + 1] - cuts[i];
        if (mass == 0) continue;
        d.atoms.push_back({atoms[i], rat(mass, 64)});
    }
    if (d.atoms.empty()) d.atoms.push_back({atoms[0], Rat(1)});
    return d;
}

}  // namespace

Instance random_instance(const RandomInstanceParams& params, uint64_t seed) {
    if (params.n_vertices < 2 || params.n_vertices > 8)
        throw std::domain_error("random instances need 2..8 vertices");
    if (params.support_size < 1 || params.support_size > 3)
        throw std::domain_error("support size must lie in 1..3");
    for (uint64_t attempt = 0;; ++attempt) {
        RngStream rng = stream_for(seed, attempt, 0x5EED);
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < params.n_vertices; ++u)
            for (int v = u + 1; v < params.n_vertices; ++v)
                if (rng.bernoulli(params.edge_prob)) edges.push_back({u, v});
        if (static_cast<int>(edges.size()) > params.max_edges) continue;
        if (edges.empty() && params.edge_prob > 0) continue;
        Graph g = make_graph(params.n_vertices, edges);

        BatchStructure arrival;
        if (params.arrival == ArrivalKind::VertexArrival) {
            std::vector<int> order(params.n_vertices);
            for (int i = 0; i < params.n_vertices; ++i) order[i] = i;
            for (int i = params.n_vertices - 1; i > 0; --i)
                std::swap(order[i], order[rng.below(i + 1)]);
            arrival = vertex_arrival(order);
        } else if (params.arrival == ArrivalKind::EdgeArrival) {
            std::vector<int> order(g.edge_count());
            for (int i = 0; i < g.edge_count(); ++i) order[i] = i;
            for (int i = g.edge_count() - 1; i > 0; --i)
                std::swap(order[i], order[rng.below(i + 1)]);
            arrival = edge_arrival(order);
        } else {
            throw std::domain_error("random instances use vertex or edge arrival");
        }

        Instance inst;
        if (params.correlated_batches) {
            auto batches = batches_of(arrival, g);
            std::vector<JointDistribution> dists;
            for (const auto& b : batches)
                dists.push_back(random_joint(rng, static_cast<int>(b.size()),
                                             b.empty() ? 1 : params.support_size));
            inst = make_instance(std::move(g), std::move(arrival), std::move(dists));
        } else {
            std::vector<Marginal> margs;
            for (int e = 0; e < g.edge_count(); ++e)
                margs.push_back(random_marginal(rng, params.support_size));
            inst = make_independent_instance(std::move(g), std::move(arrival), margs);
        }
        if (inst.joint_support_size() > params.max_joint_support) continue;
        return inst;
    }
}

PricingSearchResult pricing_adversarial_search(uint64_t budget, uint64_t seed) {
    if (budget < 1) throw std::domain_error("search budget must be at least 1");
    std::optional<PricingSearchResult> best;
    uint64_t evaluated = 0;
    for (uint64_t cand = 0; cand < budget; ++cand) {
        RngStream rng = stream_for(seed, cand, 0x9C1);
        // 4 vertices arriving 0,1,2,3; each pair carries a two-point
        // distribution, often degenerate (zero) to keep OPT structures sparse.
        std::vector<std::pair<int, int>> edges;
        std::vector<Marginal> margs;
        for (int u = 0; u < 4; ++u)
            for (int v = u + 1; v < 4; ++v) {
                uint64_t shape = rng.below(4);
                if (shape == 0) continue;  // absent edge
                Marginal m;
                if (shape == 1) {
                    // deterministic weight k/8, k in 1..32
                    m.support.push_back({rat(static_cast<long>(1 + rng.below(32)), 8), Rat(1)});
                } else if (shape == 2) {
                    // rare high edge: weight W with small probability q
                    long denom = 1 << (1 + rng.below(6));  // 2..64
                    Rat q(1, denom);
                    Rat w(static_cast<long>(1 + rng.below(64)), 1);
                    m.support.push_back({w, q});
                    m.support.push_back({Rat(0), Rat(1) - q});
                } else {
                    // balanced two-point
                    Rat q = rat(static_cast<long>(1 + rng.below(63)), 64);
                    Rat w = rat(static_cast<long>(1 + rng.below(32)), 4);
                    m.support.push_back({w, q});
                    if (q != 1) m.support.push_back({Rat(0), Rat(1) - q});
                }
                edges.push_back({u, v});
                margs.push_back(std::move(m));
            }
        if (edges.empty()) continue;
        Instance inst;
        try {
            inst = make_independent_instance(make_graph(4, edges),
                                             vertex_arrival({0, 1, 2, 3}), margs);
            if (inst.joint_support_size() > 4096) continue;
            PricingOutcome run = dynamic_pricing_exact(inst);
            ++evaluated;
            if (run.opt_value == 0) continue;
            if (!best || run.ratio < best->ratio) {
                best = PricingSearchResult{inst, run.ratio, run.value, run.opt_value, 0};
            }
        } catch (const CapacityError&) {
            continue;
        }
    }
    if (!best) throw std::runtime_error("pricing search produced no valid candidate");
    best->candidates_evaluated = evaluated;
    return *best;
}

Instance instance_by_name(const std::string& name, const Rat& eps, uint64_t seed) {
    if (name == "fig1a") return fig1a_two_triangles(eps);
    if (name == "fig1b") return fig1b_ex_ante_gadget(eps);
    if (name == "bad-ocrs") return bad_ocrs_example(eps);
    if (name == "random") return random_instance(RandomInstanceParams{}, seed);
    throw std::domain_error("unknown instance name: " + name +
                            " (expected fig1a, fig1b, bad-ocrs, or random)");
}

}  // namespace pm
