#pragma once

#include <vector>

#include "prophetmatch/graph.hpp"

namespace pm {

// Explicitly listed downward-closed family over a small ground set.
struct FeasibilityFamily {
    int ground = 0;
    std::vector<ElemMask> sets;  // sorted, deduplicated

    bool contains(ElemMask s) const;
    // Checks downward closure exhaustively (every one-element-removed subset
    // of a feasible set is feasible) and that the empty set is present.
    void validate() const;
};

FeasibilityFamily make_family(int ground, const std::vector<std::vector<int>>& sets);

// Downward closure of the given sets (adds all subsets).
FeasibilityFamily downward_closure(int ground, const std::vector<std::vector<int>>& maximal_sets);

inline bool is_feasible(const FeasibilityFamily& family, ElemMask set) {
    return family.contains(set);
}

}  // namespace pm
