#pragma once

#include <cstdint>
#include <vector>

#include "prophetmatch/rational.hpp"

namespace pm {

// Counter-based splittable generator (SplitMix64 core). Streams are derived
// from (seed, trial, step) so independent trials and batches can be sampled
// in parallel and replayed deterministically. Draw order within a step is
// fixed: batch order first, then edge index.
struct RngStream {
    uint64_t state = 0;

    explicit RngStream(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exact-threshold Bernoulli: bias below 2^-64.
    bool bernoulli(const Rat& p);

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return n <= 1 ? 0 : next_u64() % n; }
};

// Independent stream for (seed, trial, step).
RngStream stream_for(uint64_t seed, uint64_t trial, uint64_t step);

// Precomputed cumulative thresholds for repeated categorical draws.
// Probabilities must be nonnegative and sum to at most 1; any residual mass
// maps to index `size()` (used for "none" outcomes).
class CategoricalSampler {
public:
    explicit CategoricalSampler(const std::vector<Rat>& probs);
    // Returns an index in [0, size()] where size() means the residual event.
    std::size_t draw(RngStream& rng) const;
    std::size_t size() const { return thresholds_.size(); }

private:
    std::vector<unsigned __int128> thresholds_;  // cumulative, scaled by 2^64
};

}  // namespace pm
