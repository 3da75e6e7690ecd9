#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prophetmatch/instance.hpp"
#include "prophetmatch/instances.hpp"
#include "prophetmatch/rng.hpp"

using namespace pm;

TEST_CASE("rational parse and format round-trip") {
    CHECK(rat_parse("3/8") == Rat(3, 8));
    CHECK(rat_parse("-5/2") == Rat(-5, 2));
    CHECK(rat_parse("7") == Rat(7));
    CHECK(rat_parse("6/8") == Rat(3, 4));  // canonicalized
    CHECK(rat_str(Rat(3, 8)) == "3/8");
    CHECK(rat_str(Rat(1)) == "1/1");
    CHECK_THROWS_AS(rat_parse("1/0"), std::domain_error);
    CHECK_THROWS_AS(rat_parse("abc"), std::domain_error);
}

TEST_CASE("weight_of sums subsets") {
    Weights w = {Rat(1), Rat(1)};
    CHECK(weight_of(w, {}) == 0);

    Weights w2 = {Rat(3), Rat(5)};
    CHECK(weight_of(w2, {0, 1}) == 8);

    // A realized big edge at eps = 1/4 weighs 1/(4 eps) = 1.
    Rat eps(1, 4);
    Weights w3 = {Rat(1) / (4 * eps)};
    CHECK(weight_of(w3, {0}) == 1);

    CHECK_THROWS_AS(weight_of(w2, {2}), std::domain_error);
}

TEST_CASE("batches_of: vertex arrival on the triangle") {
    Graph g = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    auto batches = batches_of(vertex_arrival({0, 1, 2}), g);
    REQUIRE(batches.size() == 3);
    CHECK(batches[0].empty());
    CHECK(batches[1] == std::vector<int>{0});             // (ab)
    CHECK(batches[2] == std::vector<int>{1, 2});          // (ac),(bc)
}

TEST_CASE("batches_of: edge arrival is singletons in order") {
    Graph g = make_graph(3, {{0, 1}, {1, 2}});
    auto batches = batches_of(edge_arrival({1, 0}), g);
    REQUIRE(batches.size() == 2);
    CHECK(batches[0] == std::vector<int>{1});
    CHECK(batches[1] == std::vector<int>{0});
}

TEST_CASE("batches_of: explicit partition is preserved") {
    Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto batches = batches_of(explicit_batches({{0, 1}, {2, 3}}), g);
    REQUIRE(batches.size() == 2);
    CHECK(batches[0] == std::vector<int>{0, 1});
    CHECK(batches[1] == std::vector<int>{2, 3});
    CHECK_THROWS_AS(batches_of(explicit_batches({{0, 1}, {1, 2}}), g), std::domain_error);
    CHECK_THROWS_AS(batches_of(explicit_batches({{0, 1}}), g), std::domain_error);
    CHECK_THROWS_AS(batches_of(vertex_arrival({0, 1}), g), std::domain_error);
}

TEST_CASE("matching feasibility is vertex-disjointness") {
    Graph g = make_graph(4, {{0, 1}, {2, 3}, {1, 2}});
    CHECK(is_matching(g, 0b011));   // (01),(23)
    CHECK(!is_matching(g, 0b101));  // (01),(12) share vertex 1
}

TEST_CASE("explicit family membership and the bad-example family") {
    FeasibilityFamily fam = downward_closure(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(is_feasible(fam, 0));
    CHECK(is_feasible(fam, 0b0101));   // {1,3} in paper numbering
    CHECK(!is_feasible(fam, 0b0011));  // {1,2} in paper numbering is excluded
    CHECK(!is_feasible(fam, 0b0111));
}

TEST_CASE("downward closure is validated") {
    // {0,1} without {1} is rejected.
    CHECK_THROWS_AS(make_family(2, {{0, 1}, {0}, {}}), std::domain_error);
    CHECK_NOTHROW(make_family(2, {{0, 1}, {0}, {1}, {}}));
}

TEST_CASE("batch partition property on random instances") {
    for (uint64_t seed = 0; seed < 25; ++seed) {
        RandomInstanceParams p;
        p.n_vertices = 4 + static_cast<int>(seed % 4);
        p.arrival = seed % 2 ? ArrivalKind::VertexArrival : ArrivalKind::EdgeArrival;
        p.correlated_batches = seed % 3 == 0;
        Instance inst = random_instance(p, seed);
        std::vector<int> seen(inst.num_elements(), 0);
        for (const auto& b : inst.batches)
            for (int e : b) seen[e]++;
        for (int c : seen) CHECK(c == 1);
    }
}

TEST_CASE("exact weight sums are permutation invariant") {
    Weights w = {Rat(1, 3), Rat(2, 7), Rat(5, 11), Rat(1, 64)};
    Rat forward = 0, backward = 0;
    for (int i = 0; i < 4; ++i) forward += w[i];
    for (int i = 3; i >= 0; --i) backward += w[i];
    CHECK(forward == backward);
}

TEST_CASE("JSON round-trip preserves instances losslessly") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        RandomInstanceParams p;
        p.n_vertices = 5;
        p.correlated_batches = seed % 2;
        Instance inst = random_instance(p, seed);
        Instance back = instance_from_json(instance_to_json(inst));
        CHECK(back.num_elements() == inst.num_elements());
        REQUIRE(back.num_batches() == inst.num_batches());
        for (int t = 0; t < inst.num_batches(); ++t) {
            CHECK(back.batches[t] == inst.batches[t]);
            REQUIRE(back.dists[t].atoms.size() == inst.dists[t].atoms.size());
            for (std::size_t a = 0; a < inst.dists[t].atoms.size(); ++a) {
                CHECK(back.dists[t].atoms[a].prob == inst.dists[t].atoms[a].prob);
                CHECK(back.dists[t].atoms[a].weights == inst.dists[t].atoms[a].weights);
            }
        }
    }
    // Family instances round-trip too.
    Instance bad = bad_ocrs_example(Rat(1, 1000000));
    Instance back = instance_from_json(instance_to_json(bad));
    CHECK(back.family_mode());
    CHECK(back.family->sets == bad.family->sets);
    CHECK(back.dists[0].atoms.size() == bad.dists[0].atoms.size());
}

TEST_CASE("instance validation rejects inconsistent structures") {
    Graph g = make_graph(2, {{0, 1}});
    // Distribution arity mismatch.
    CHECK_THROWS_AS(make_instance(g, edge_arrival({0}), {point_mass({Rat(1), Rat(2)})}),
                    std::domain_error);
    // Probabilities not summing to 1.
    JointDistribution bad;
    bad.atoms.push_back({{Rat(1)}, Rat(1, 2)});
    CHECK_THROWS_AS(make_instance(g, edge_arrival({0}), {bad}), std::domain_error);
}

TEST_CASE("rng streams are deterministic and bernoulli is unbiased enough") {
    RngStream a = stream_for(42, 1, 2);
    RngStream b = stream_for(42, 1, 2);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c = stream_for(42, 1, 3);
    CHECK(c.next_u64() != stream_for(42, 1, 2).next_u64());

    RngStream r = stream_for(7, 0, 0);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += r.bernoulli(Rat(3, 8));
    double p = double(hits) / n;
    CHECK(p > 0.365);
    CHECK(p < 0.385);
}
