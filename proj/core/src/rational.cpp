#include "prophetmatch/rational.hpp"

namespace pm {

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::domain_error("empty rational literal");
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::domain_error("malformed rational literal: " + s);
    if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0)
        throw std::domain_error("rational with zero denominator: " + s);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

mpz_class denominator_lcm(const std::vector<Rat>& values) {
    mpz_class l = 1;
    for (const Rat& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), mpq_denref(v.get_mpq_t()));
    return l;
}

std::optional<std::vector<long long>> scale_to_int64(const std::vector<Rat>& values,
                                                     const mpz_class& scale) {
    // Headroom: partial sums over <= 2^16 terms must stay within int64.
    static const mpz_class kLimit = mpz_class(1) << 46;
    std::vector<long long> out;
    out.reserve(values.size());
    for (const Rat& v : values) {
        mpz_class scaled = mpz_class(v.get_num()) * scale;
        mpz_divexact(scaled.get_mpz_t(), scaled.get_mpz_t(), mpq_denref(v.get_mpq_t()));
        if (mpz_cmpabs(scaled.get_mpz_t(), kLimit.get_mpz_t()) > 0) return std::nullopt;
        out.push_back(scaled.get_si());
    }
    return out;
}

}  // namespace pm
