#include "prophetmatch/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pm {

int Graph::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    for (int i = 0; i < edge_count(); ++i)
        if (edges[i].u == u && edges[i].v == v) return i;
    return -1;
}

void Graph::validate() const {
    if (vertex_count < 0) throw std::domain_error("negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
        if (e.u >= e.v) throw std::domain_error("edge endpoints not normalized or self-loop");
        if (e.u < 0 || e.v >= vertex_count) throw std::domain_error("edge endpoint out of range");
        if (!seen.insert({e.u, e.v}).second) throw std::domain_error("parallel edge");
    }
    if (edge_count() > kMaxElements) throw std::domain_error("edge count above supported cap");
}

Graph make_graph(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    g.vertex_count = vertex_count;
    for (auto [u, v] : edges) {
        if (u == v) throw std::domain_error("self-loop");
        if (u > v) std::swap(u, v);
        g.edges.push_back({u, v});
    }
    g.validate();
    return g;
}

Rat weight_of(const Weights& weights, const std::vector<int>& set) {
    Rat total = 0;
    for (int e : set) {
        if (e < 0 || e >= static_cast<int>(weights.size()))
            throw std::domain_error("unknown edge index in weight_of");
        total += weights[e];
    }
    return total;
}

Rat weight_of_mask(const Weights& weights, ElemMask set) {
    Rat total = 0;
    for (uint32_t m = set; m; m &= m - 1) {
        int e = lowest_bit(m);
        if (e >= static_cast<int>(weights.size()))
            throw std::domain_error("unknown edge index in weight_of");
        total += weights[e];
    }
    return total;
}

bool is_matching(const Graph& g, ElemMask edge_set) {
    VertexMask used = 0;
    for (uint32_t m = edge_set; m; m &= m - 1) {
        const Edge& e = g.edges[lowest_bit(m)];
        VertexMask both = (1u << e.u) | (1u << e.v);
        if (used & both) return false;
        used |= both;
    }
    return true;
}

VertexMask matched_vertices(const Graph& g, ElemMask edge_set) {
    VertexMask used = 0;
    for (uint32_t m = edge_set; m; m &= m - 1) {
        const Edge& e = g.edges[lowest_bit(m)];
        used |= (1u << e.u) | (1u << e.v);
    }
    return used;
}

}  // namespace pm
