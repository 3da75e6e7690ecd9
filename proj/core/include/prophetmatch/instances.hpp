#pragma once

#include <string>

#include "prophetmatch/instance.hpp"
#include "prophetmatch/rational.hpp"

namespace pm {

// Two triangles {a,b,c}, {d,e,f} with unit fixed edges arriving first, then
// the nine cross edges of weight 1/(4*eps) realized with probability eps,
// in lexicographic order. Edge arrival. Requires 0 < eps <= 1/9.
Instance fig1a_two_triangles(const Rat& eps);

// Same topology; the six triangle edges have weight 1 with probability 1/2
// and the nine cross edges weight 15/(62*eps) with probability eps. Arrival:
// (ab),(bc),(ac), then (de),(ef),(df), then the cross edges lexicographically.
Instance fig1b_ex_ante_gadget(const Rat& eps);

// Four elements, feasible sets = all pairs except {1,2} plus singletons, in
// two fixed batches {1,2} and {3,4}. Element weights follow the published
// values up to infinitesimal symmetry-breaking perturbations that make every
// max-weight set unique (so the deterministic optimum reproduces the
// symmetric realization distributions exactly). Requires 0 < eps <= 1/100.
Instance bad_ocrs_example(const Rat& eps);

struct RandomInstanceParams {
    int n_vertices = 6;           // <= 8
    Rat edge_prob = Rat(1, 2);
    int support_size = 2;         // atoms per edge (independent) or per batch (correlated), <= 3
    ArrivalKind arrival = ArrivalKind::VertexArrival;
    bool correlated_batches = false;
    unsigned long long max_joint_support = 20'000;  // resample until the product fits
    int max_edges = 9;
};

// Reproducible random instance; weights are dyadic rationals (denominator 64)
// and probabilities have denominator 64.
Instance random_instance(const RandomInstanceParams& params, uint64_t seed);

// Random search over 4-vertex vertex-arrival instances with two-point
// distributions, minimizing the dynamic-pricing ratio by exact evaluation.
struct PricingSearchResult {
    Instance instance;
    Rat ratio;
    Rat pricing_value;
    Rat opt_value;
    uint64_t candidates_evaluated = 0;
};
PricingSearchResult pricing_adversarial_search(uint64_t budget, uint64_t seed);

// Built-ins addressable by name: "fig1a", "fig1b", "bad-ocrs", "random".
// "random" takes the seed from the second argument.
Instance instance_by_name(const std::string& name, const Rat& eps, uint64_t seed = 1);

}  // namespace pm
