#include "prophetmatch/feasibility.hpp"

#include <algorithm>
#include <stdexcept>

namespace pm {

bool FeasibilityFamily::contains(ElemMask s) const {
    return std::binary_search(sets.begin(), sets.end(), s);
}

void FeasibilityFamily::validate() const {
    if (ground < 0 || ground > 20) throw std::domain_error("family ground set outside [0,20]");
    if (!contains(0)) throw std::domain_error("family does not contain the empty set");
    for (ElemMask s : sets) {
        if (s >> ground) throw std::domain_error("family set outside ground set");
        for (uint32_t m = s; m; m &= m - 1)
            if (!contains(s & ~(1u << lowest_bit(m))))
                throw std::domain_error("family is not downward closed");
    }
}

FeasibilityFamily make_family(int ground, const std::vector<std::vector<int>>& sets) {
    FeasibilityFamily f;
    f.ground = ground;
    for (const auto& s : sets) {
        ElemMask m = 0;
        for (int e : s) {
            if (e < 0 || e >= ground) throw std::domain_error("family element out of range");
            m |= 1u << e;
        }
        f.sets.push_back(m);
    }
    std::sort(f.sets.begin(), f.sets.end());
    f.sets.erase(std::unique(f.sets.begin(), f.sets.end()), f.sets.end());
    f.validate();
    return f;
}

FeasibilityFamily downward_closure(int ground, const std::vector<std::vector<int>>& maximal_sets) {
    std::vector<ElemMask> closed;
    for (const auto& s : maximal_sets) {
        ElemMask m = 0;
        for (int e : s) {
            if (e < 0 || e >= ground) throw std::domain_error("family element out of range");
            m |= 1u << e;
        }
        // all subsets of m
        for (ElemMask sub = m;; sub = (sub - 1) & m) {
            closed.push_back(sub);
            if (sub == 0) break;
        }
    }
    std::sort(closed.begin(), closed.end());
    closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
    FeasibilityFamily f;
    f.ground = ground;
    f.sets = std::move(closed);
    f.validate();
    return f;
}

}  // namespace pm
