#pragma once

#include <vector>

#include "prophetmatch/rational.hpp"
#include "prophetmatch/rng.hpp"

namespace pm {

// One atom of a batch's joint weight distribution: a weight vector over the
// batch's elements (batch-local order) and its probability.
struct Atom {
    std::vector<Rat> weights;
    Rat prob;
};

// Finite discrete joint distribution over a batch's elements. Correlation is
// allowed within the batch, never across batches.
struct JointDistribution {
    std::vector<Atom> atoms;

    int arity() const { return atoms.empty() ? 0 : static_cast<int>(atoms[0].weights.size()); }
    void canonicalize();    // normalize all rationals (gmp two-arg ctor does not)
    void validate() const;  // probs in (0,1] summing to 1, distinct nonneg atoms
    int sample(RngStream& rng) const;
};

JointDistribution point_mass(std::vector<Rat> weights);
JointDistribution two_point(const Rat& value, const Rat& prob_value, const Rat& other = Rat(0));

// Single-element marginal as a (weight, prob) list, merged over equal weights.
struct Marginal {
    std::vector<std::pair<Rat, Rat>> support;  // distinct weights, probs sum to 1
};

// Product of independent single-element distributions (used when rebuilding a
// batch joint for re-ordered instances).
JointDistribution product_joint(const std::vector<Marginal>& marginals);

}  // namespace pm
