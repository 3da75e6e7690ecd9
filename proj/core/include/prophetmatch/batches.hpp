#pragma once

#include <vector>

#include "prophetmatch/graph.hpp"

namespace pm {

enum class ArrivalKind { VertexArrival, EdgeArrival, Explicit };

// Arrival structure. For VertexArrival, `order` is the arrival sequence of
// vertices (order[i] arrives at time i) and batch i consists of all edges
// from order[i] back to earlier vertices; the first batch is empty. For
// EdgeArrival, `order` is the arrival sequence of edge indices and every
// batch is a singleton. Explicit carries the ordered partition directly.
struct BatchStructure {
    ArrivalKind kind = ArrivalKind::EdgeArrival;
    std::vector<int> order;
    std::vector<std::vector<int>> explicit_batches;
};

BatchStructure vertex_arrival(std::vector<int> vertex_order);
BatchStructure edge_arrival(std::vector<int> edge_order);
BatchStructure explicit_batches(std::vector<std::vector<int>> batches);

// Ordered partition (B_1, ..., B_T) of the edge set; throws on structures
// inconsistent with the graph (bad permutation, non-partition).
std::vector<std::vector<int>> batches_of(const BatchStructure& s, const Graph& g);

// Explicit-family variant over an abstract ground set.
std::vector<std::vector<int>> batches_of_ground(const BatchStructure& s, int ground);

}  // namespace pm
