#include "prophetmatch/flow.hpp"

#include <limits>
#include <stdexcept>

namespace pm {

MaxWeightFlow::MaxWeightFlow(int node_count) : arcs_(node_count) {}

int MaxWeightFlow::add_arc(int u, int v, long long cap, long long gain) {
    if (cap < 0) throw std::domain_error("negative arc capacity");
    Arc fwd{v, cap, gain, static_cast<int>(arcs_[v].size())};
    Arc bwd{u, 0, -gain, static_cast<int>(arcs_[u].size())};
    arcs_[u].push_back(fwd);
    arcs_[v].push_back(bwd);
    arc_ref_.push_back({u, static_cast<int>(arcs_[u].size()) - 1});
    return static_cast<int>(arc_ref_.size()) - 1;
}

void MaxWeightFlow::solve(int source, int sink) {
    const int n = static_cast<int>(arcs_.size());
    const long long NEG = std::numeric_limits<long long>::min() / 4;
    // Bellman-Ford per augmentation; the networks here are tiny.
    for (long long iter = 0;; ++iter) {
        if (iter > 1'000'000) throw std::runtime_error("flow iteration cap exceeded");
        std::vector<long long> best(n, NEG);
        std::vector<std::pair<int, int>> parent(n, {-1, -1});
        best[source] = 0;
        // One extra round detects a positive residual cycle, which the
        // max-gain augmenting invariant rules out.
        for (int round = 0; round <= n; ++round) {
            bool changed = false;
            for (int u = 0; u < n; ++u) {
                if (best[u] == NEG) continue;
                for (int i = 0; i < static_cast<int>(arcs_[u].size()); ++i) {
                    const Arc& a = arcs_[u][i];
                    if (a.cap <= 0) continue;
                    long long cand = best[u] + a.gain;
                    if (cand > best[a.to]) {
                        best[a.to] = cand;
                        parent[a.to] = {u, i};
                        changed = true;
                    }
                }
            }
            if (!changed) break;
            if (round == n) throw std::logic_error("positive cycle in residual network");
        }
        if (best[sink] == NEG || best[sink] <= 0) break;
        // Bottleneck along the best path.
        long long push = std::numeric_limits<long long>::max();
        for (int v = sink; v != source;) {
            auto [u, i] = parent[v];
            push = std::min(push, arcs_[u][i].cap);
            v = u;
        }
        for (int v = sink; v != source;) {
            auto [u, i] = parent[v];
            Arc& a = arcs_[u][i];
            a.cap -= push;
            arcs_[a.to][a.rev].cap += push;
            v = u;
        }
        total_gain_ += push * best[sink];
    }
}

long long MaxWeightFlow::flow_on(int arc_id) const {
    auto [u, i] = arc_ref_[arc_id];
    const Arc& a = arcs_[u][i];
    // Flow equals the residual capacity accumulated on the reverse arc.
    return arcs_[a.to][a.rev].cap;
}

}  // namespace pm
