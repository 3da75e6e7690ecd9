#pragma once

#include <cstdint>
#include <vector>

namespace pm {

// Exact max-weight flow on a small DAG-shaped network (all integer data).
// Augments along most-profitable paths while a positive-gain augmenting path
// exists; with integral capacities the result is an integral optimum of the
// corresponding transportation LP.
class MaxWeightFlow {
public:
    explicit MaxWeightFlow(int node_count);

    // Adds arc u->v with capacity cap >= 0 and per-unit gain (may be any
    // int64). Returns the arc id for flow queries.
    int add_arc(int u, int v, long long cap, long long gain);

    // Maximizes total gain of a feasible flow from source to sink (flow value
    // is free). Throws on iteration blow-up.
    void solve(int source, int sink);

    long long flow_on(int arc_id) const;
    long long total_gain() const { return total_gain_; }

private:
    struct Arc {
        int to;
        long long cap;
        long long gain;  // of the forward direction
        int rev;         // index of the reverse arc in arcs_[to]
    };
    std::vector<std::vector<Arc>> arcs_;
    std::vector<std::pair<int, int>> arc_ref_;  // arc_id -> (node, position)
    long long total_gain_ = 0;
};

}  // namespace pm
