#pragma once

#include <cstdint>
#include <vector>

#include "prophetmatch/rational.hpp"

namespace pm {

// Bitmask over edge (or ground-element) indices. All enumeration caps keep
// index counts at or below 28 bits.
using ElemMask = uint32_t;
using VertexMask = uint32_t;

constexpr int kMaxElements = 28;

inline int popcount(uint32_t m) { return __builtin_popcount(m); }
inline int lowest_bit(uint32_t m) { return __builtin_ctz(m); }

// Lexicographic order on index sets viewed as sorted sequences, a proper
// prefix comparing smaller. Let m be the smallest differing index: if m is in
// a, then a is smaller iff b still has indices beyond m; if m is in b, then a
// is smaller iff a has none.
inline bool lex_less(ElemMask a, ElemMask b) {
    if (a == b) return false;
    int m = lowest_bit(a ^ b);
    if ((a >> m) & 1u) return (b >> m) != 0;
    return (a >> m) == 0;
}

struct Edge {
    int u = 0, v = 0;  // normalized u < v
};

// Simple undirected graph: no self-loops, no parallel edges, every endpoint
// in [0, vertex_count).
struct Graph {
    int vertex_count = 0;
    std::vector<Edge> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    // -1 if absent.
    int edge_index(int u, int v) const;
    void validate() const;
};

Graph make_graph(int vertex_count, const std::vector<std::pair<int, int>>& edges);

// Per-edge weights, indexed over the full edge/element set.
using Weights = std::vector<Rat>;

// Sum of weights over a set; throws on out-of-range indices.
Rat weight_of(const Weights& weights, const std::vector<int>& set);
Rat weight_of_mask(const Weights& weights, ElemMask set);

// True iff the edge set is vertex-disjoint.
bool is_matching(const Graph& g, ElemMask edge_set);

VertexMask matched_vertices(const Graph& g, ElemMask edge_set);

}  // namespace pm
