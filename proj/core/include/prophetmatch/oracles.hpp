#pragma once

#include <stdexcept>
#include <vector>

#include "prophetmatch/distribution.hpp"
#include "prophetmatch/feasibility.hpp"
#include "prophetmatch/graph.hpp"

namespace pm {

// Raised when an instance exceeds an enumeration cap; the message names the
// cap that was hit.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maximum-weight matching, exact. DP over vertex subsets for |V| <= 20;
// otherwise edge-subset enumeration for |E| <= 24. Ties are broken toward
// the lexicographically smallest sorted edge-index sequence, so repeated
// calls are bit-identical.
struct MatchingResult {
    ElemMask edges = 0;
    Rat value;
};
MatchingResult max_weight_matching(const Graph& g, const Weights& w);

// Same contract over an explicitly listed family (ground set <= 20).
MatchingResult max_weight_feasible_set(const FeasibilityFamily& family, const Weights& w);

// Optimal fractional matching over the degree polytope
// F_M = { y >= 0 : sum_u y_(uv) <= 1 for every v }. Solved exactly through a
// max-weight matching of the bipartite double cover; the returned vector is
// half-integral.
struct FractionalMatching {
    std::vector<Rat> y;
    Rat value;
};
FractionalMatching fractional_matching_opt(const Graph& g, const Weights& w);

// Expected weight of the top y-quantile of a single-edge marginal: sort the
// support by descending weight and accumulate mass up to y, splitting the
// boundary atom fractionally.
Rat revenue_curve(const Marginal& dist, const Rat& y);

// Reusable matching solver over pre-scaled integer weights; scratch buffers
// are stamped, not cleared, so per-call cost is proportional to the states
// visited. Tie-breaks are identical to max_weight_matching.
class Int64MatchingSolver {
public:
    explicit Int64MatchingSolver(const Graph& g);
    ElemMask solve(const std::vector<long long>& w);

private:
    struct Cell {
        long long value;
        ElemMask edges;
    };
    ElemMask full_ = 0;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<int> edge_u_, edge_v_;
    std::vector<Cell> memo_;
    std::vector<uint32_t> stamp_;
    uint32_t epoch_ = 0;
    const std::vector<long long>* w_ = nullptr;

    Cell solve_rec(VertexMask avail);
};

// Reusable fractional-optimum solver (degree polytope); returns 2*y per edge
// (the optimum is half-integral) via the bipartite double cover.
class Int64FractionalSolver {
public:
    explicit Int64FractionalSolver(const Graph& g);
    std::vector<int> solve_doubled(const std::vector<long long>& w);

private:
    int base_edges_;
    Graph cover_;
    Int64MatchingSolver inner_;
    std::vector<long long> cw_;
};

// Optimal ex-ante relaxation: maximize sum_e revenue_curve(dist_e, y_e)
// subject to y in F_M.
struct ExAnteSolution {
    std::vector<Rat> y;
    std::vector<Rat> threshold;      // tau_e = F_e^{-1}(1 - y_e)
    std::vector<Rat> boundary_take;  // fraction of the tau-atom included in the quantile
    Rat objective;
};
ExAnteSolution ex_ante_opt(const Graph& g, const std::vector<Marginal>& per_edge);

}  // namespace pm
