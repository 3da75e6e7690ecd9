#pragma once

#include <vector>

#include "prophetmatch/estimation.hpp"
#include "prophetmatch/instance.hpp"
#include "prophetmatch/oracles.hpp"
#include "prophetmatch/rng.hpp"

namespace pm {

// ---------------------------------------------------------------------------
// Realization schemes. A scheme lists, per batch, the exact distribution of
// the realized subset R_t (or fractional vector r^t), independent across
// batches. Schemes built from an instance keep the observed weight atom so
// reduction runs can value their selections.
// ---------------------------------------------------------------------------

struct SchemeAtom {
    Rat prob;
    ElemMask realized = 0;  // global element mask, subset of the batch
    int weight_atom = -1;   // index into the instance batch distribution; -1 synthetic
};

struct IntegralScheme {
    int num_elements = 0;
    std::vector<std::vector<int>> batches;
    std::vector<std::vector<SchemeAtom>> atoms;
    std::vector<Rat> marginals;  // x_e = Pr[e in R]

    void recompute_marginals();
    // Largest realized-set size over all atoms (vertex arrival requires <= 1).
    int max_realized_size() const;
};

struct FracSchemeAtom {
    Rat prob;
    std::vector<Rat> r;    // aligned with the batch element list
    int weight_atom = -1;
};

struct FractionalScheme {
    int num_elements = 0;
    std::vector<std::vector<int>> batches;
    std::vector<std::vector<FracSchemeAtom>> atoms;
    std::vector<Rat> marginals;  // x_e = E[r_e]

    void recompute_marginals();
};

// ---------------------------------------------------------------------------
// Sampling operations
// ---------------------------------------------------------------------------

struct SampledWeights {
    Weights w;
    std::vector<int> atom;  // chosen atom per batch
};

// One draw per batch, in batch order.
SampledWeights sample_weights(const Instance& inst, RngStream& rng);

// OPT dispatch for an instance's ground structure.
MatchingResult instance_opt(const Instance& inst, const Weights& w);

// R_t for the observed batch atom: resamples every other batch independently,
// computes OPT on the combined assignment, intersects with B_t.
ElemMask realize_opt_batch(const Instance& inst, int t, int observed_atom, RngStream& rng);

// Fractional analogue: restriction of f-OPT to B_t (batch-local order).
std::vector<Rat> realize_fopt_batch(const Instance& inst, int t, int observed_atom,
                                    RngStream& rng);

// Exact schemes by enumeration of the full joint support.
IntegralScheme exact_opt_scheme(const Instance& inst, unsigned long long support_cap = 1'000'000);
FractionalScheme exact_fopt_scheme(const Instance& inst,
                                   unsigned long long support_cap = 1'000'000);

enum class MarginalMode { Opt, FOpt };

std::vector<Rat> exact_marginals(const Instance& inst, MarginalMode mode,
                                 unsigned long long support_cap = 1'000'000);

struct McMarginals {
    std::vector<double> x;
    std::vector<double> ci_halfwidth;  // 95% per edge
    uint64_t n = 0;
    uint64_t seed = 0;
};
McMarginals mc_marginals(const Instance& inst, MarginalMode mode, uint64_t n, uint64_t seed);

// Exact benchmark values over the instance's joint support.
Rat expected_opt_value(const Instance& inst, unsigned long long support_cap = 1'000'000);
Rat expected_fopt_value(const Instance& inst, unsigned long long support_cap = 1'000'000);

// Ex-ante objective of the instance's per-edge marginals (graph instances).
ExAnteSolution instance_ex_ante(const Instance& inst);

// Tail realization of an ex-ante solution. The deterministic form applies the
// threshold rule w_e >= tau_e literally; the rng overload additionally splits
// the boundary atom so that Pr[e realized] equals y_e exactly (and therefore
// keeps the realized marginals inside the degree polytope).
ElemMask ex_ante_realize(const Graph& g, const Weights& w, const ExAnteSolution& sol);
ElemMask ex_ante_realize(const Graph& g, const Weights& w, const ExAnteSolution& sol,
                         RngStream& rng);

// Per-edge independent scheme of the ex-ante relaxation; edge-arrival
// instances only. Realization probabilities equal the solution's y.
IntegralScheme ex_ante_scheme(const Instance& inst, const ExAnteSolution& sol);

// Enumerates the full joint support: callback(atom_index_per_batch, prob, w).
void for_each_joint_atom(
    const Instance& inst, unsigned long long support_cap,
    const std::function<void(const std::vector<int>&, const Rat&, const Weights&)>& fn);

}  // namespace pm
