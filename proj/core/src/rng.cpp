#include "prophetmatch/rng.hpp"

namespace pm {

namespace {

uint64_t mix(uint64_t x) {
    x = (x ^ (x >> 33)) * 0xFF51AFD7ED558CCDull;
    x = (x ^ (x >> 33)) * 0xC4CEB9FE1A85EC53ull;
    return x ^ (x >> 33);
}

// floor(p * 2^64), saturating at 2^64 for p >= 1.
unsigned __int128 threshold_u128(const Rat& p) {
    if (p <= 0) return 0;
    if (p >= 1) return (unsigned __int128)1 << 64;
    mpz_class num = p.get_num();
    num <<= 64;
    mpz_class thr = num / p.get_den();
    unsigned __int128 out = 0;
    // thr < 2^64 here, so two limbs suffice.
    mpz_class lo = thr & mpz_class(0xFFFFFFFFul);
    mpz_class hi = thr >> 32;
    out = (unsigned __int128)hi.get_ui() << 32 | lo.get_ui();
    return out;
}

}  // namespace

bool RngStream::bernoulli(const Rat& p) {
    unsigned __int128 thr = threshold_u128(p);
    return (unsigned __int128)next_u64() < thr;
}

RngStream stream_for(uint64_t seed, uint64_t trial, uint64_t step) {
    uint64_t k = mix(seed ^ 0x8E9B5F1C3A2D7E4Bull);
    k = mix(k + 0x9E3779B97F4A7C15ull * trial);
    k = mix(k + 0xC2B2AE3D27D4EB4Full * step);
    return RngStream(k);
}

CategoricalSampler::CategoricalSampler(const std::vector<Rat>& probs) {
    Rat cum = 0;
    thresholds_.reserve(probs.size());
    for (const Rat& p : probs) {
        cum += p;
        thresholds_.push_back(threshold_u128(cum));
    }
}

std::size_t CategoricalSampler::draw(RngStream& rng) const {
    unsigned __int128 u = rng.next_u64();
    for (std::size_t i = 0; i < thresholds_.size(); ++i)
        if (u < thresholds_[i]) return i;
    return thresholds_.size();
}

}  // namespace pm
