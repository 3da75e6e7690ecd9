#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pm {

// Exact arbitrary-precision rational. All exact-mode computation in the
// library runs on this type end-to-end; doubles appear only in Monte-Carlo
// estimates and report rendering.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_pow2(int k) {
    // 2^k for k possibly negative.
    Rat r = 1;
    if (k >= 0) {
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), k);
    } else {
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), -k);
    }
    return r;
}

// Parses "p/q" or "p" (also accepts a leading '-').
Rat rat_parse(const std::string& s);

// Canonical serialization, always "p/q" ("3/8", "1/1", "-5/2").
std::string rat_str(const Rat& r);

inline double rat_d(const Rat& r) { return r.get_d(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Least common multiple of the denominators, as an integer. Used to scale
// weight vectors onto int64 for the matching DPs.
mpz_class denominator_lcm(const std::vector<Rat>& values);

// Scales values by `scale` and narrows to int64. Returns nullopt if any
// scaled value does not fit comfortably (sums of up to 2^16 terms must not
// overflow).
std::optional<std::vector<long long>> scale_to_int64(const std::vector<Rat>& values,
                                                     const mpz_class& scale);

}  // namespace pm
