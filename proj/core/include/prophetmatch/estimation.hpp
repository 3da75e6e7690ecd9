#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "prophetmatch/graph.hpp"
#include "prophetmatch/oracles.hpp"

namespace pm {

// ---------------------------------------------------------------------------
// Exact engine: expectation by depth-first enumeration over all randomness
// (weight atoms x realizations x algorithm coins), organized as a forward
// sweep over a per-step scenario list with a small hashable state.
// ---------------------------------------------------------------------------

// One outcome of an algorithm step under a fixed scenario: probability of the
// internal coins, the elements selected, the value gained, successor state.
struct ProcBranch {
    Rat prob;
    ElemMask selected = 0;
    Rat gain;
    uint64_t next = 0;
};

// A scenario is one atom of the step's exogenous randomness (realization and,
// where applicable, the observed batch weights). Scenario probabilities sum
// to 1 within a step and are independent across steps.
struct Scenario {
    Rat prob;
    int id = 0;
};

class BranchingProcess {
public:
    virtual ~BranchingProcess() = default;
    virtual int num_steps() const = 0;
    virtual uint64_t initial_state() const = 0;
    virtual const std::vector<Scenario>& scenarios(int t) const = 0;
    virtual void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const = 0;
    // Elements realized in this scenario; drives selectability conditioning.
    virtual ElemMask scenario_elements(int t, int scenario_id) const;
};

struct ExactValue {
    Rat value;
    uint64_t branch_count = 0;
};

// Exact expectation of the accumulated gain. Throws CapacityError with the
// measured branching factor when the cap is exceeded.
ExactValue exact_expectation(const BranchingProcess& p, uint64_t branching_cap = 10'000'000);

// Per-element conditional selection probabilities: one entry per
// (step, scenario, realized element) with Pr[e selected at t | scenario].
struct SelectabilityEntry {
    int t = 0;
    int scenario_id = 0;
    int element = 0;
    Rat conditional;
};

struct SelectabilityResult {
    std::vector<SelectabilityEntry> entries;
    std::optional<Rat> min_conditional;
    std::vector<Rat> pr_selected;  // unconditional, per element
    Rat expected_gain;
    uint64_t branch_count = 0;
};

SelectabilityResult exact_selectability(const BranchingProcess& p, int num_elements,
                                        uint64_t branching_cap = 10'000'000);

// ---------------------------------------------------------------------------
// Monte-Carlo engine: seeded, sharded, mergeable.
// ---------------------------------------------------------------------------

struct Welford {
    uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const Welford& other);
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct ExpectationResult {
    Rat exact_value;          // exact mode only
    double estimate = 0.0;    // mc mode (and rendered exact value)
    double ci_halfwidth = 0;  // 95% normal approximation, mc only
    double stddev = 0.0;
    bool exact = false;
    uint64_t sample_count = 0;
    uint64_t seed = 0;
};

// Number of independent shards every MC run is split into; fixed so results
// do not depend on the worker count.
constexpr uint64_t kMcShards = 8;

// Worker cap from PROPHET_MATCH_THREADS (default: hardware, at most 8).
int mc_worker_count();

// trial(seed, trial_index) -> sampled value. Deterministic per (seed, n).
ExpectationResult mc_expectation(const std::function<double(uint64_t, uint64_t)>& trial,
                                 uint64_t n, uint64_t seed);

}  // namespace pm
