#include "prophetmatch/oracles.hpp"

#include <algorithm>
#include <array>

#include "prophetmatch/flow.hpp"

namespace pm {

namespace {

template <class W>
struct BestSet {
    W value{};
    ElemMask edges = 0;
};

template <class W>
bool better(const BestSet<W>& a, const BestSet<W>& b) {
    if (a.value != b.value) return a.value > b.value;
    return lex_less(a.edges, b.edges);
}

template <class W>
class MatchingDp {
public:
    MatchingDp(const Graph& g, const std::vector<W>& w) : g_(g), w_(w) {
        vertex_edges_.resize(g.vertex_count);
        for (int e = 0; e < g.edge_count(); ++e) {
            vertex_edges_[g.edges[e].u].push_back(e);
            vertex_edges_[g.edges[e].v].push_back(e);
        }
        memo_.resize(std::size_t(1) << g.vertex_count);
        done_.assign(memo_.size(), 0);
    }

    BestSet<W> solve(VertexMask avail) {
        if (avail == 0) return {};
        if (done_[avail]) return memo_[avail];
        int v = lowest_bit(avail);
        BestSet<W> best = solve(avail & ~(1u << v));  // leave v unmatched
        for (int e : vertex_edges_[v]) {
            int other = g_.edges[e].u == v ? g_.edges[e].v : g_.edges[e].u;
            if (!(avail >> other & 1)) continue;
            BestSet<W> cand = solve(avail & ~(1u << v) & ~(1u << other));
            cand.value += w_[e];
            cand.edges |= 1u << e;
            if (better(cand, best)) best = cand;
        }
        done_[avail] = 1;
        memo_[avail] = best;
        return best;
    }

private:
    const Graph& g_;
    const std::vector<W>& w_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<BestSet<W>> memo_;
    std::vector<char> done_;
};

template <class W>
BestSet<W> matching_by_edge_enumeration(const Graph& g, const std::vector<W>& w) {
    BestSet<W> best;
    const int m = g.edge_count();
    // DFS over include/exclude decisions in edge-index order.
    struct Frame {
        int e;
        VertexMask used;
        ElemMask chosen;
        W value;
    };
    std::vector<Frame> stack{{0, 0, 0, W{}}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.e == m) {
            BestSet<W> cand{f.value, f.chosen};
            if (better(cand, best)) best = cand;
            continue;
        }
        stack.push_back({f.e + 1, f.used, f.chosen, f.value});
        const Edge& ed = g.edges[f.e];
        VertexMask both = (1u << ed.u) | (1u << ed.v);
        if (!(f.used & both)) {
            W nv = f.value;
            nv += w[f.e];
            stack.push_back({f.e + 1, f.used | both, f.chosen | (1u << f.e), nv});
        }
    }
    return best;
}

MatchingResult run_matching(const Graph& g, const Weights& w) {
    if (static_cast<int>(w.size()) != g.edge_count())
        throw std::domain_error("one weight per edge required");
    mpz_class scale = denominator_lcm(w);
    auto scaled = scale_to_int64(w, scale);
    ElemMask edges;
    if (g.vertex_count <= 20) {
        if (scaled) {
            MatchingDp<long long> dp(g, *scaled);
            edges = dp.solve((VertexMask(1) << g.vertex_count) - 1).edges;
        } else {
            std::vector<Rat> rw(w.begin(), w.end());
            MatchingDp<Rat> dp(g, rw);
            edges = dp.solve((VertexMask(1) << g.vertex_count) - 1).edges;
        }
    } else if (g.edge_count() <= 24) {
        if (scaled) {
            edges = matching_by_edge_enumeration<long long>(g, *scaled).edges;
        } else {
            std::vector<Rat> rw(w.begin(), w.end());
            edges = matching_by_edge_enumeration<Rat>(g, rw).edges;
        }
    } else {
        throw CapacityError("matching oracle caps exceeded: needs |V| <= 20 or |E| <= 24");
    }
    return {edges, weight_of_mask(w, edges)};
}

}  // namespace

MatchingResult max_weight_matching(const Graph& g, const Weights& w) { return run_matching(g, w); }

MatchingResult max_weight_feasible_set(const FeasibilityFamily& family, const Weights& w) {
    if (family.ground > 20) throw CapacityError("explicit family cap exceeded: ground set <= 20");
    if (static_cast<int>(w.size()) != family.ground)
        throw std::domain_error("one weight per element required");
    BestSet<Rat> best{Rat(0), 0};  // the empty set, always feasible
    for (ElemMask s : family.sets) {
        BestSet<Rat> cand{weight_of_mask(w, s), s};
        if (better(cand, best)) best = cand;
    }
    return {best.edges, best.value};
}

FractionalMatching fractional_matching_opt(const Graph& g, const Weights& w) {
    if (g.vertex_count > 10)
        throw CapacityError("fractional matching cap exceeded: needs |V| <= 10");
    if (static_cast<int>(w.size()) != g.edge_count())
        throw std::domain_error("one weight per edge required");
    // Bipartite double cover: each edge (u,v) becomes (u+, v-) and (v+, u-);
    // the optimum of the degree polytope is half the cover's best matching.
    const int n = g.vertex_count;
    Graph cover;
    cover.vertex_count = 2 * n;
    Weights cw;
    // Two cover edges per original edge, in edge order.
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edges[e];
        cover.edges.push_back({ed.u, n + ed.v});
        cw.push_back(w[e]);
        cover.edges.push_back({ed.v, n + ed.u});
        cw.push_back(w[e]);
    }
    MatchingResult cm = max_weight_matching(cover, cw);
    FractionalMatching out;
    out.y.assign(g.edge_count(), Rat(0));
    const Rat half(1, 2);
    for (int e = 0; e < g.edge_count(); ++e) {
        int used = ((cm.edges >> (2 * e)) & 1) + ((cm.edges >> (2 * e + 1)) & 1);
        out.y[e] = Rat(used) * half;
    }
    out.value = cm.value * half;
    return out;
}

Int64MatchingSolver::Int64MatchingSolver(const Graph& g) {
    if (g.vertex_count > 20) throw CapacityError("matching solver cap exceeded: needs |V| <= 20");
    full_ = (g.vertex_count == 0) ? 0 : ((VertexMask(1) << g.vertex_count) - 1);
    vertex_edges_.resize(g.vertex_count);
    for (int e = 0; e < g.edge_count(); ++e) {
        vertex_edges_[g.edges[e].u].push_back(e);
        vertex_edges_[g.edges[e].v].push_back(e);
        edge_u_.push_back(g.edges[e].u);
        edge_v_.push_back(g.edges[e].v);
    }
    memo_.resize(std::size_t(1) << g.vertex_count);
    stamp_.assign(memo_.size(), 0);
}

ElemMask Int64MatchingSolver::solve(const std::vector<long long>& w) {
    w_ = &w;
    ++epoch_;
    return solve_rec(full_).edges;
}

Int64MatchingSolver::Cell Int64MatchingSolver::solve_rec(VertexMask avail) {
    if (avail == 0) return {0, 0};
    if (stamp_[avail] == epoch_) return memo_[avail];
    int v = lowest_bit(avail);
    Cell best = solve_rec(avail & ~(VertexMask(1) << v));
    for (int e : vertex_edges_[v]) {
        int other = edge_u_[e] == v ? edge_v_[e] : edge_u_[e];
        if (!(avail >> other & 1)) continue;
        Cell cand = solve_rec(avail & ~(VertexMask(1) << v) & ~(VertexMask(1) << other));
        cand.value += (*w_)[e];
        cand.edges |= ElemMask(1) << e;
        if (cand.value > best.value ||
            (cand.value == best.value && lex_less(cand.edges, best.edges)))
            best = cand;
    }
    stamp_[avail] = epoch_;
    memo_[avail] = best;
    return best;
}

namespace {

Graph double_cover(const Graph& g) {
    Graph cover;
    cover.vertex_count = 2 * g.vertex_count;
    for (const Edge& e : g.edges) {
        cover.edges.push_back({e.u, g.vertex_count + e.v});
        cover.edges.push_back({e.v, g.vertex_count + e.u});
    }
    return cover;
}

}  // namespace

Int64FractionalSolver::Int64FractionalSolver(const Graph& g)
    : base_edges_(g.edge_count()), cover_(double_cover(g)), inner_(cover_) {
    if (g.vertex_count > 10)
        throw CapacityError("fractional matching cap exceeded: needs |V| <= 10");
    cw_.resize(cover_.edge_count());
}

std::vector<int> Int64FractionalSolver::solve_doubled(const std::vector<long long>& w) {
    for (int e = 0; e < base_edges_; ++e) cw_[2 * e] = cw_[2 * e + 1] = w[e];
    ElemMask m = inner_.solve(cw_);
    std::vector<int> doubled(base_edges_);
    for (int e = 0; e < base_edges_; ++e)
        doubled[e] = ((m >> (2 * e)) & 1) + ((m >> (2 * e + 1)) & 1);
    return doubled;
}

Rat revenue_curve(const Marginal& dist, const Rat& y) {
    if (y < 0 || y > 1) throw std::domain_error("quantile outside [0,1]");
    auto support = dist.support;
    std::sort(support.begin(), support.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    Rat remaining = y;
    Rat total = 0;
    for (const auto& [weight, prob] : support) {
        if (remaining <= 0) break;
        Rat take = std::min(remaining, prob);
        total += weight * take;
        remaining -= take;
    }
    return total;
}

ExAnteSolution ex_ante_opt(const Graph& g, const std::vector<Marginal>& per_edge) {
    if (static_cast<int>(per_edge.size()) != g.edge_count())
        throw std::domain_error("one marginal per edge required");
    const int n = g.vertex_count;
    const int m = g.edge_count();

    // Segment decomposition of each concave revenue curve: one segment per
    // support atom, slope-ordered by construction (weights sorted descending).
    struct Seg {
        int edge;
        Rat slope;
        Rat mass;
    };
    std::vector<Seg> segs;
    std::vector<std::vector<std::pair<Rat, Rat>>> sorted_support(m);
    std::vector<Rat> all_probs, all_slopes;
    for (int e = 0; e < m; ++e) {
        auto s = per_edge[e].support;
        if (s.empty()) throw std::domain_error("empty marginal support");
        std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        sorted_support[e] = s;
        for (const auto& [weight, prob] : s) {
            if (weight > 0) {
                segs.push_back({e, weight, prob});
                all_slopes.push_back(weight);
            }
            all_probs.push_back(prob);
        }
    }
    mpz_class mass_scale = denominator_lcm(all_probs);
    if (mass_scale > 2'000'000) throw CapacityError("ex-ante mass denominators too large (lcm above 2e6)");
    mpz_class slope_scale = all_slopes.empty() ? mpz_class(1) : denominator_lcm(all_slopes);
    const long long M = mass_scale.get_si();

    MaxWeightFlow flow(2 + 2 * n);
    const int S = 0, T = 1;
    auto plus = [&](int v) { return 2 + v; };
    auto minus = [&](int v) { return 2 + n + v; };
    for (int v = 0; v < n; ++v) {
        flow.add_arc(S, plus(v), M, 0);
        flow.add_arc(minus(v), T, M, 0);
    }
    std::vector<std::array<int, 2>> seg_arcs;
    for (const Seg& sg : segs) {
        Rat cap_r = sg.mass * Rat(mass_scale);
        Rat gain_r = sg.slope * Rat(slope_scale);
        if (cap_r.get_den() != 1 || gain_r.get_den() != 1) throw std::logic_error("bad scaling");
        if (!cap_r.get_num().fits_slong_p() || !gain_r.get_num().fits_slong_p())
            throw CapacityError("ex-ante scaled data does not fit int64");
        long long cap = cap_r.get_num().get_si();
        long long gain = gain_r.get_num().get_si();
        const Edge& ed = g.edges[sg.edge];
        int a1 = flow.add_arc(plus(ed.u), minus(ed.v), cap, gain);
        int a2 = flow.add_arc(plus(ed.v), minus(ed.u), cap, gain);
        seg_arcs.push_back({a1, a2});
    }
    flow.solve(S, T);

    ExAnteSolution out;
    out.y.assign(m, Rat(0));
    const Rat two_m = Rat(2) * Rat(mass_scale);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        long total = static_cast<long>(flow.flow_on(seg_arcs[i][0]) + flow.flow_on(seg_arcs[i][1]));
        out.y[segs[i].edge] += Rat(total) / two_m;
    }
    // Extend to a maximal point of F_M along zero-revenue mass, edge order.
    std::vector<Rat> slack(n, Rat(1));
    for (int e = 0; e < m; ++e) {
        slack[g.edges[e].u] -= out.y[e];
        slack[g.edges[e].v] -= out.y[e];
    }
    for (int e = 0; e < m; ++e) {
        Rat head = Rat(1) - out.y[e];
        Rat room = std::min(head, std::min(slack[g.edges[e].u], slack[g.edges[e].v]));
        if (room > 0) {
            out.y[e] += room;
            slack[g.edges[e].u] -= room;
            slack[g.edges[e].v] -= room;
        }
    }
    // Thresholds and objective from the final quantiles.
    out.objective = 0;
    out.threshold.assign(m, Rat(0));
    out.boundary_take.assign(m, Rat(0));
    for (int e = 0; e < m; ++e) {
        out.objective += revenue_curve(per_edge[e], out.y[e]);
        Rat remaining = out.y[e];
        Rat tau = sorted_support[e].back().first;  // F^{-1}(1), the top weight, when y = 0
        Rat take_frac = 0;
        if (remaining == 0) {
            tau = sorted_support[e].front().first;
        } else {
            for (const auto& [weight, prob] : sorted_support[e]) {
                Rat take = std::min(remaining, prob);
                tau = weight;
                take_frac = take / prob;
                remaining -= take;
                if (remaining <= 0) break;
            }
        }
        out.threshold[e] = tau;
        out.boundary_take[e] = take_frac;
    }
    return out;
}

}  // namespace pm
