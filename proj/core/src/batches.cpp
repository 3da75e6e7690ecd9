#include "prophetmatch/batches.hpp"

#include <algorithm>
#include <stdexcept>

namespace pm {

namespace {

void check_permutation(const std::vector<int>& order, int n, const char* what) {
    if (static_cast<int>(order.size()) != n)
        throw std::domain_error(std::string("arrival order length does not match ") + what);
    std::vector<bool> seen(n, false);
    for (int x : order) {
        if (x < 0 || x >= n || seen[x])
            throw std::domain_error(std::string("arrival order is not a permutation of ") + what);
        seen[x] = true;
    }
}

void check_partition(const std::vector<std::vector<int>>& batches, int n) {
    std::vector<bool> seen(n, false);
    for (const auto& b : batches)
        for (int e : b) {
            if (e < 0 || e >= n || seen[e])
                throw std::domain_error("explicit batches are not a partition of the element set");
            seen[e] = true;
        }
    for (bool s : seen)
        if (!s) throw std::domain_error("explicit batches do not cover the element set");
}

}  // namespace

BatchStructure vertex_arrival(std::vector<int> vertex_order) {
    BatchStructure s;
    s.kind = ArrivalKind::VertexArrival;
    s.order = std::move(vertex_order);
    return s;
}

BatchStructure edge_arrival(std::vector<int> edge_order) {
    BatchStructure s;
    s.kind = ArrivalKind::EdgeArrival;
    s.order = std::move(edge_order);
    return s;
}

BatchStructure explicit_batches(std::vector<std::vector<int>> batches) {
    BatchStructure s;
    s.kind = ArrivalKind::Explicit;
    s.explicit_batches = std::move(batches);
    return s;
}

std::vector<std::vector<int>> batches_of(const BatchStructure& s, const Graph& g) {
    switch (s.kind) {
        case ArrivalKind::VertexArrival: {
            check_permutation(s.order, g.vertex_count, "vertices");
            std::vector<int> pos(g.vertex_count);
            for (int i = 0; i < g.vertex_count; ++i) pos[s.order[i]] = i;
            // B_i = { (v_i, v_j) : j < i }, including the empty first batch.
            std::vector<std::vector<int>> batches(g.vertex_count);
            for (int e = 0; e < g.edge_count(); ++e) {
                int later = std::max(pos[g.edges[e].u], pos[g.edges[e].v]);
                batches[later].push_back(e);
            }
            for (auto& b : batches) std::sort(b.begin(), b.end());
            return batches;
        }
        case ArrivalKind::EdgeArrival: {
            check_permutation(s.order, g.edge_count(), "edges");
            std::vector<std::vector<int>> batches;
            batches.reserve(s.order.size());
            for (int e : s.order) batches.push_back({e});
            return batches;
        }
        case ArrivalKind::Explicit: {
            check_partition(s.explicit_batches, g.edge_count());
            auto batches = s.explicit_batches;
            for (auto& b : batches) std::sort(b.begin(), b.end());
            return batches;
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<std::vector<int>> batches_of_ground(const BatchStructure& s, int ground) {
    if (s.kind == ArrivalKind::EdgeArrival) {
        check_permutation(s.order, ground, "elements");
        std::vector<std::vector<int>> batches;
        for (int e : s.order) batches.push_back({e});
        return batches;
    }
    if (s.kind == ArrivalKind::Explicit) {
        check_partition(s.explicit_batches, ground);
        auto batches = s.explicit_batches;
        for (auto& b : batches) std::sort(b.begin(), b.end());
        return batches;
    }
    throw std::domain_error("vertex arrival requires a graph");
}

}  // namespace pm
