#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prophetmatch/instances.hpp"
#include "prophetmatch/oracles.hpp"
#include "prophetmatch/rng.hpp"

using namespace pm;

namespace {

// Independent oracle: enumerate all edge subsets, keep matchings, apply the
// same value-then-lex rule.
MatchingResult brute_matching(const Graph& g, const Weights& w) {
    MatchingResult best{0, Rat(0)};
    for (ElemMask s = 0; s < (ElemMask(1) << g.edge_count()); ++s) {
        if (!is_matching(g, s)) continue;
        Rat v = weight_of_mask(w, s);
        if (v > best.value || (v == best.value && lex_less(s, best.edges)))
            best = {s, v};
    }
    return best;
}

// Independent oracle for the degree polytope: optimal vectors are
// half-integral, so enumerate y in {0, 1/2, 1}^E.
Rat brute_fopt_value(const Graph& g, const Weights& w) {
    const int m = g.edge_count();
    REQUIRE(m <= 10);
    Rat best(0);
    std::vector<int> doubled(m, 0);
    const Rat half(1, 2);
    std::function<void(int)> rec = [&](int e) {
        if (e == m) {
            std::vector<Rat> load(g.vertex_count, Rat(0));
            Rat value(0);
            for (int i = 0; i < m; ++i) {
                Rat y = Rat(doubled[i]) * half;
                load[g.edges[i].u] += y;
                load[g.edges[i].v] += y;
                value += w[i] * y;
            }
            for (int v = 0; v < g.vertex_count; ++v)
                if (load[v] > 1) return;
            if (value > best) best = value;
            return;
        }
        for (int d = 0; d <= 2; ++d) {
            doubled[e] = d;
            rec(e + 1);
        }
    };
    rec(0);
    return best;
}

Graph gadget_graph() {
    std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    for (int u = 0; u <= 2; ++u)
        for (int v = 3; v <= 5; ++v) edges.push_back({u, v});
    return make_graph(6, edges);
}

}  // namespace

TEST_CASE("max weight matching on small named cases") {
    // Path with a dominant pair.
    Graph path = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    MatchingResult r = max_weight_matching(path, {Rat(3), Rat(1), Rat(3)});
    CHECK(r.edges == 0b101);
    CHECK(r.value == 6);

    // Unit triangle: lexicographically first edge wins the tie.
    Graph tri = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    MatchingResult t = max_weight_matching(tri, {Rat(1), Rat(1), Rat(1)});
    CHECK(t.edges == 0b001);
    CHECK(t.value == 1);
}

TEST_CASE("fig 1a: with every big edge realized the optimum takes three of them") {
    Graph g = gadget_graph();
    Rat eps(1, 100);
    Weights w;
    for (int e = 0; e < 6; ++e) w.push_back(Rat(1));
    for (int e = 6; e < 15; ++e) w.push_back(Rat(1) / (4 * eps));
    MatchingResult r = max_weight_matching(g, w);
    CHECK(r.value == 75);
    CHECK(brute_matching(g, w).value == 75);
    CHECK(popcount(r.edges) == 3);
}

TEST_CASE("matching DP agrees with subset enumeration, including ties") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
        RngStream rng = stream_for(900, seed, 0);
        int n = 4 + static_cast<int>(rng.below(3));
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.below(2)) edges.push_back({u, v});
        if (edges.empty() || edges.size() > 10) continue;
        Graph g = make_graph(n, edges);
        Weights w;
        for (std::size_t e = 0; e < edges.size(); ++e)
            w.push_back(rat(static_cast<long>(rng.below(5)), 2));  // ties likely
        MatchingResult dp = max_weight_matching(g, w);
        MatchingResult brute = brute_matching(g, w);
        CHECK(dp.value == brute.value);
        CHECK(dp.edges == brute.edges);
        // Deterministic: identical repeated calls.
        CHECK(max_weight_matching(g, w).edges == dp.edges);
    }
}

TEST_CASE("max weight feasible set over the bad-example family") {
    FeasibilityFamily fam = downward_closure(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    Rat eps(1, 1000);
    MatchingResult both = max_weight_feasible_set(fam, {eps, eps, Rat(1), Rat(1)});
    CHECK(both.edges == 0b1100);
    CHECK(both.value == 2);

    MatchingResult one = max_weight_feasible_set(fam, {eps, eps, Rat(1), Rat(0)});
    CHECK(one.edges == 0b0101);  // {0,2}: lexicographic among the tied pairs
    CHECK(one.value == 1 + eps);

    MatchingResult zero = max_weight_feasible_set(fam, {Rat(0), Rat(0), Rat(0), Rat(0)});
    CHECK(zero.edges == 0);
}

TEST_CASE("fractional optimum on named cases") {
    Graph tri = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    FractionalMatching f = fractional_matching_opt(tri, {Rat(1), Rat(1), Rat(1)});
    CHECK(f.value == Rat(3, 2));
    for (const Rat& y : f.y) CHECK(y == Rat(1, 2));

    Graph single = make_graph(2, {{0, 1}});
    FractionalMatching s = fractional_matching_opt(single, {Rat(7)});
    CHECK(s.value == 7);
    CHECK(s.y[0] == 1);

    // Fig 1a with no big edge realized: each triangle contributes 3/2.
    Graph g = gadget_graph();
    Weights w(15, Rat(0));
    for (int e = 0; e < 6; ++e) w[e] = 1;
    CHECK(fractional_matching_opt(g, w).value == 3);
}

TEST_CASE("fractional optimum matches half-integral enumeration and dominates matching") {
    for (uint64_t seed = 0; seed < 30; ++seed) {
        RngStream rng = stream_for(901, seed, 0);
        int n = 4 + static_cast<int>(rng.below(3));
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.below(2)) edges.push_back({u, v});
        if (edges.empty() || edges.size() > 9) continue;
        Graph g = make_graph(n, edges);
        Weights w;
        for (std::size_t e = 0; e < edges.size(); ++e)
            w.push_back(rat(static_cast<long>(rng.below(65)), 64));
        FractionalMatching f = fractional_matching_opt(g, w);
        CHECK(f.value == brute_fopt_value(g, w));
        CHECK(f.value >= max_weight_matching(g, w).value);
        for (const Rat& y : f.y) {
            Rat doubled = y * 2;
            CHECK(doubled.get_den() == 1);  // half-integral
        }
        // Degree feasibility.
        std::vector<Rat> load(n, Rat(0));
        for (int e = 0; e < g.edge_count(); ++e) {
            load[g.edges[e].u] += f.y[e];
            load[g.edges[e].v] += f.y[e];
        }
        for (int v = 0; v < n; ++v) CHECK(load[v] <= 1);
    }
}

TEST_CASE("revenue curve quantiles") {
    Marginal half;
    half.support = {{Rat(1), Rat(1, 2)}, {Rat(0), Rat(1, 2)}};
    CHECK(revenue_curve(half, Rat(1, 2)) == Rat(1, 2));
    CHECK(revenue_curve(half, Rat(1)) == Rat(1, 2));

    Marginal skew;
    skew.support = {{Rat(10), Rat(1, 10)}, {Rat(2), Rat(9, 10)}};
    CHECK(revenue_curve(skew, Rat(3, 10)) == Rat(7, 5));  // 10*(1/10) + 2*(2/10)

    CHECK_THROWS_AS(revenue_curve(half, Rat(3, 2)), std::domain_error);
}

TEST_CASE("revenue curve is concave") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        RngStream rng = stream_for(902, seed, 0);
        Marginal m;
        Rat remaining(1);
        for (int i = 0; i < 3; ++i) {
            Rat p = i == 2 ? remaining : std::min(remaining, rat(static_cast<long>(1 + rng.below(32)), 64));
            if (p <= 0) break;
            m.support.push_back({rat(static_cast<long>(rng.below(100)), 8), p});
            remaining -= p;
        }
        if (!m.support.empty() && remaining > 0) m.support.back().second += remaining;
        for (int k = 0; k < 10; ++k) {
            Rat y1 = rat(static_cast<long>(rng.below(65)), 64);
            Rat y3 = rat(static_cast<long>(rng.below(65)), 64);
            if (y1 > y3) std::swap(y1, y3);
            Rat y2 = (y1 + y3) / 2;
            // Midpoint value at least the chord.
            CHECK(revenue_curve(m, y2) * 2 >= revenue_curve(m, y1) + revenue_curve(m, y3));
        }
    }
}

TEST_CASE("ex-ante relaxation on named cases") {
    // Single edge, w = 1 w.p. 1/2: value 1/2, reported maximal y = 1.
    Graph single = make_graph(2, {{0, 1}});
    Marginal half;
    half.support = {{Rat(1), Rat(1, 2)}, {Rat(0), Rat(1, 2)}};
    ExAnteSolution sol = ex_ante_opt(single, {half});
    CHECK(sol.objective == Rat(1, 2));
    CHECK(sol.y[0] == 1);

    // Two deterministic unit edges sharing a vertex: the degree constraint
    // binds, total value 1.
    Graph vee = make_graph(3, {{0, 1}, {0, 2}});
    Marginal unit;
    unit.support = {{Rat(1), Rat(1)}};
    ExAnteSolution v = ex_ante_opt(vee, {unit, unit});
    CHECK(v.objective == 1);
    CHECK(v.y[0] + v.y[1] == 1);
}

TEST_CASE("ex-ante value of the fig 1b gadget is 321/62 - 9 eps") {
    Rat eps(1, 1000);
    Instance inst = fig1b_ex_ante_gadget(eps);
    ExAnteSolution sol = ex_ante_opt(inst.graph, inst.element_marginals());
    CHECK(sol.objective == Rat(321, 62) - 9 * eps);
    CHECK(rat_abs(sol.objective - Rat(321, 62)) <= Rat(1, 100));
}

TEST_CASE("benchmark chain holds pointwise: matching <= fractional <= ex-ante") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        RngStream rng = stream_for(903, seed, 0);
        int n = 4 + static_cast<int>(rng.below(3));
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.below(2)) edges.push_back({u, v});
        if (edges.empty() || edges.size() > 9) continue;
        Graph g = make_graph(n, edges);
        std::vector<Marginal> margs;
        Weights expect;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            Marginal m;
            Rat w = rat(static_cast<long>(1 + rng.below(64)), 32);
            Rat p = rat(static_cast<long>(1 + rng.below(64)), 64);
            m.support.push_back({w, p});
            if (p != 1) m.support.push_back({Rat(0), Rat(1) - p});
            margs.push_back(m);
        }
        ExAnteSolution sol = ex_ante_opt(g, margs);
        // The ex-ante objective dominates the expected fractional optimum; a
        // cheap sanity proxy here is the deterministic mean-weight instance.
        Weights mean;
        for (const Marginal& m : margs) {
            Rat mu(0);
            for (auto& [w, p] : m.support) mu += w * p;
            mean.push_back(mu);
        }
        CHECK(sol.objective >= fractional_matching_opt(g, mean).value);
    }
}

TEST_CASE("capacity errors name their caps") {
    // 27 vertices and 26 edges exceeds both the DP and enumeration caps.
    Graph big;
    big.vertex_count = 27;
    for (int v = 1; v <= 26; ++v) big.edges.push_back({0, v});
    Weights w(big.edge_count(), Rat(1));
    CHECK_THROWS_AS(max_weight_matching(big, w), CapacityError);
}
