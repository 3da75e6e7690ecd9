#pragma once

#include <vector>

#include "prophetmatch/ocrs.hpp"

namespace pm {

// ---------------------------------------------------------------------------
// End-to-end online algorithms: observe the batch weights, resample the rest,
// set R_t = OPT(combined) restricted to the batch, and hand R_t to an OCRS.
// Exact variants enumerate all randomness; sampled variants produce replayable
// transcripts.
// ---------------------------------------------------------------------------

struct ReductionOutcome {
    Rat alg_value;
    Rat benchmark;
    Rat ratio;  // alg_value / benchmark; 1 when the benchmark is 0
    SelectabilityResult selectability;
};

ReductionOutcome prophet_via_vertex_ocrs_exact(const Instance& inst,
                                               unsigned long long support_cap = 1'000'000);
ReductionOutcome prophet_via_fractional_ocrs_exact(const Instance& inst,
                                                   unsigned long long support_cap = 1'000'000);
ReductionOutcome prophet_via_edge_ocrs_exact(const Instance& inst, const OcrsConstant& c,
                                             unsigned long long support_cap = 1'000'000);
// Edge OCRS driven by the ex-ante tail scheme, benchmarked against the
// ex-ante objective.
ReductionOutcome prophet_edge_ocrs_ex_ante_exact(const Instance& inst, const OcrsConstant& c);
// Greedy batched selector over explicit families (takes a maximum number of
// realized elements each stage, uniformly among the maximum-size choices).
ReductionOutcome prophet_generic_family_exact(const Instance& inst,
                                              unsigned long long support_cap = 1'000'000);

// Greedy baseline on the actual arrivals: accept the best feasible
// positive-weight edge of each batch.
Rat greedy_online_exact(const Instance& inst, unsigned long long support_cap = 1'000'000);

// Dynamic vertex pricing: p_v is half the expected contribution of v's future
// edges to OPT; an arriving vertex matches the unmatched candidate maximizing
// w_vk - p_k when that surplus covers its own price.
struct PricingOutcome {
    std::vector<Rat> prices;  // per vertex
    Rat value;
    Rat opt_value;
    Rat ratio;
};
PricingOutcome dynamic_pricing_exact(const Instance& inst,
                                     unsigned long long support_cap = 1'000'000);

// Value of the optimal online policy by backward induction over
// (batch, matched set, observed batch atom).
Rat optimal_online_value(const Instance& inst, uint64_t state_cap = 1'000'000);

// ---------------------------------------------------------------------------
// Sampled runs with transcripts
// ---------------------------------------------------------------------------

struct RunStep {
    int weight_atom = -1;
    ElemMask realized = 0;        // realized set R_t (edge/vertex OCRS)
    std::vector<double> r;        // fractional realization, batch-local
    std::vector<double> alphas;   // candidate acceptance probabilities
    std::vector<uint8_t> coins;   // coin outcomes, candidate order
    ElemMask selected = 0;
};

struct OnlineRun {
    double value = 0;
    std::vector<RunStep> steps;
};

enum class ReductionKind { VertexHalf, FracVertex, EdgeC };

// Precomputes exact marginals and alphas once; individual trials then sample
// the resampling scheme and coins. Streams: (seed, trial, 0) draws the batch
// atoms of w; (seed, trial, 1 + t) drives batch t's resampling and coins.
class ReductionSampler {
public:
    ReductionSampler(const Instance& inst, ReductionKind kind,
                     OcrsConstant c = ocrs_warmup());
    OnlineRun run(uint64_t seed, uint64_t trial) const;

private:
    const Instance& inst_;
    ReductionKind kind_;
    OcrsConstant c_;
    std::vector<int> vertex_order_;
    std::vector<Rat> x_;
    std::optional<VertexAlphaTable> vertex_alphas_;
    std::optional<EdgeAlphaResult> edge_alphas_;
    std::vector<int> edge_of_batch_;
};

// Monte-Carlo estimate of a reduction's expected value.
ExpectationResult reduction_value_mc(const Instance& inst, ReductionKind kind, OcrsConstant c,
                                     uint64_t n, uint64_t seed);

// Monte-Carlo selectability tally over realized conditioning events.
struct McSelectabilityEntry {
    int t;
    ElemMask realized;
    int element;
    double conditional;
    double ci_halfwidth;
    uint64_t occurrences;
};
struct McSelectability {
    std::vector<McSelectabilityEntry> entries;
    double min_conditional = 1.0;
    uint64_t n = 0;
    uint64_t seed = 0;
};
McSelectability mc_selectability(const Instance& inst, ReductionKind kind, OcrsConstant c,
                                 uint64_t n, uint64_t seed);

}  // namespace pm
