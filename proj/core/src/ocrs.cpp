#include "prophetmatch/ocrs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pm {

Rat improved_equation_residual(const Rat& c) {
    Rat one(1);
    Rat num = one - 2 * c;
    Rat den = one - c;
    Rat ratio = num / den;
    return one - 2 * c + c * c / 2 * ratio * ratio - c;
}

Rat independent_equation_residual(const Rat& c) { return Rat(1) - 2 * c + c * c - c; }

Rat lemma_gap_bound(const Rat& c) { return (Rat(1) - 2 * c) / (Rat(1) - c); }

OcrsConstant ocrs_warmup() { return {Rat(1, 3), CProvenance::Warmup}; }

namespace {

// Bisection with dyadic midpoints on (0, 1/2); f is decreasing across the
// root, positive at 0+.
Rat bisect_root(const std::function<Rat(const Rat&)>& f, double precision) {
    if (precision <= 0 || precision > 1e-2)
        throw std::domain_error("precision must lie in (0, 1e-2]");
    Rat lo(1, 1024);
    Rat hi(1, 2);
    if (f(lo) <= 0) throw std::logic_error("bisection bracket invalid at lower end");
    Rat width = hi - lo;
    // Width halves each step; run until below the requested precision.
    while (rat_d(width) > precision) {
        Rat mid = (lo + hi) / 2;
        if (f(mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
        width = hi - lo;
    }
    return (lo + hi) / 2;
}

}  // namespace

OcrsConstant solve_independent_c(double precision) {
    return {bisect_root(independent_equation_residual, precision), CProvenance::IndependentRoot};
}

OcrsConstant solve_improved_c(double precision) {
    return {bisect_root(improved_equation_residual, precision), CProvenance::ImprovedRoot};
}

// ---------------------------------------------------------------------------
// Vertex arrival
// ---------------------------------------------------------------------------

VertexAlphaTable::VertexAlphaTable(const Graph& g, const std::vector<int>& vertex_order,
                                   const std::vector<Rat>& x) {
    const int n = g.vertex_count;
    if (static_cast<int>(x.size()) != g.edge_count())
        throw std::domain_error("one marginal per edge required");
    pos_.assign(n, -1);
    for (int i = 0; i < n; ++i) pos_[vertex_order[i]] = i;
    // Degree sums must stay within the polytope.
    std::vector<Rat> degree(n, Rat(0));
    for (int e = 0; e < g.edge_count(); ++e) {
        if (x[e] < 0) throw std::domain_error("negative marginal");
        degree[g.edges[e].u] += x[e];
        degree[g.edges[e].v] += x[e];
    }
    for (int v = 0; v < n; ++v)
        if (degree[v] > 1) throw std::domain_error("marginals leave the degree polytope");

    std::vector<Rat> prior(n, Rat(0));  // mass of u's edges already revealed
    alpha_.resize(n);
    auto batches = batches_of(vertex_arrival(vertex_order), g);
    for (int t = 0; t < n; ++t) {
        alpha_[t].assign(n, Rat(0));
        for (int u = 0; u < n; ++u)
            if (pos_[u] < t) alpha_[t][u] = Rat(1) / (Rat(2) - prior[u]);
        for (int e : batches[t]) {
            prior[g.edges[e].u] += x[e];
            prior[g.edges[e].v] += x[e];
        }
    }
}

Rat vertex_alpha(const Graph& g, const std::vector<int>& vertex_order, const std::vector<Rat>& x,
                 int u, int v) {
    VertexAlphaTable table(g, vertex_order, x);
    int tu = table.arrival_position(u);
    int tv = table.arrival_position(v);
    if (tu >= tv) throw std::domain_error("u must arrive before v");
    return table.alpha_at(u, tv);
}

namespace {

const IntegralScheme& check_single_realizations(const IntegralScheme& scheme) {
    if (scheme.max_realized_size() > 1)
        throw ContractError("vertex-arrival realization with more than one edge in a batch");
    return scheme;
}

}  // namespace

VertexOcrsProcess::VertexOcrsProcess(const Graph& g, const std::vector<int>& vertex_order,
                                     const IntegralScheme& scheme, const Instance* inst)
    : g_(g), scheme_(check_single_realizations(scheme)), inst_(inst),
      alphas_(g, vertex_order, scheme.marginals), order_(vertex_order) {
    scenarios_.resize(scheme.atoms.size());
    for (std::size_t t = 0; t < scheme.atoms.size(); ++t)
        for (std::size_t a = 0; a < scheme.atoms[t].size(); ++a)
            scenarios_[t].push_back({scheme.atoms[t][a].prob, static_cast<int>(a)});
}

int VertexOcrsProcess::num_steps() const { return static_cast<int>(scheme_.atoms.size()); }

ElemMask VertexOcrsProcess::scenario_elements(int t, int scenario_id) const {
    return scheme_.atoms[t][scenario_id].realized;
}

Rat VertexOcrsProcess::gain_of(int t, int scenario_id, int e) const {
    if (!inst_) return Rat(0);
    int wa = scheme_.atoms[t][scenario_id].weight_atom;
    if (wa < 0) return Rat(0);
    const auto& batch = scheme_.batches[t];
    auto it = std::find(batch.begin(), batch.end(), e);
    return inst_->dists[t].atoms[wa].weights[it - batch.begin()];
}

void VertexOcrsProcess::step(int t, int scenario_id, uint64_t state,
                             std::vector<ProcBranch>& out) const {
    out.clear();
    const SchemeAtom& atom = scheme_.atoms[t][scenario_id];
    VertexMask matched = static_cast<VertexMask>(state);
    if (atom.realized == 0) {
        out.push_back({Rat(1), 0, Rat(0), state});
        return;
    }
    int e = lowest_bit(atom.realized);
    int v = order_[t];
    int u = g_.edges[e].u == v ? g_.edges[e].v : g_.edges[e].u;
    if ((matched >> u) & 1) {
        out.push_back({Rat(1), 0, Rat(0), state});
        return;
    }
    const Rat& a = alphas_.alpha_at(u, t);
    uint64_t next = state | (VertexMask(1) << u) | (VertexMask(1) << v);
    out.push_back({a, ElemMask(1) << e, gain_of(t, scenario_id, e), next});
    if (a != 1) out.push_back({Rat(1) - a, 0, Rat(0), state});
}

FracVertexOcrsProcess::FracVertexOcrsProcess(const Graph& g, const std::vector<int>& vertex_order,
                                             const FractionalScheme& scheme, const Instance* inst)
    : g_(g), scheme_(scheme), inst_(inst), alphas_(g, vertex_order, scheme.marginals),
      order_(vertex_order) {
    for (std::size_t t = 0; t < scheme.atoms.size(); ++t)
        for (const FracSchemeAtom& a : scheme.atoms[t]) {
            Rat sum = 0;
            for (const Rat& r : a.r) {
                if (r < 0 || r > 1) throw ContractError("fractional realization outside [0,1]");
                sum += r;
            }
            if (sum > 1)
                throw ContractError("fractional vertex-arrival realization sums above 1");
        }
    scenarios_.resize(scheme.atoms.size());
    for (std::size_t t = 0; t < scheme.atoms.size(); ++t)
        for (std::size_t a = 0; a < scheme.atoms[t].size(); ++a)
            scenarios_[t].push_back({scheme.atoms[t][a].prob, static_cast<int>(a)});
}

int FracVertexOcrsProcess::num_steps() const { return static_cast<int>(scheme_.atoms.size()); }

ElemMask FracVertexOcrsProcess::scenario_elements(int t, int scenario_id) const {
    ElemMask m = 0;
    const FracSchemeAtom& atom = scheme_.atoms[t][scenario_id];
    for (std::size_t j = 0; j < atom.r.size(); ++j)
        if (atom.r[j] > 0) m |= ElemMask(1) << scheme_.batches[t][j];
    return m;
}

void FracVertexOcrsProcess::step(int t, int scenario_id, uint64_t state,
                                 std::vector<ProcBranch>& out) const {
    out.clear();
    const FracSchemeAtom& atom = scheme_.atoms[t][scenario_id];
    VertexMask matched = static_cast<VertexMask>(state);
    int v = order_[t];
    Rat none_prob(1);
    for (std::size_t j = 0; j < atom.r.size(); ++j) {
        if (atom.r[j] == 0) continue;
        int e = scheme_.batches[t][j];
        int u = g_.edges[e].u == v ? g_.edges[e].v : g_.edges[e].u;
        if ((matched >> u) & 1) continue;
        Rat p = atom.r[j] * alphas_.alpha_at(u, t);
        Rat gain(0);
        if (inst_ && atom.weight_atom >= 0) gain = inst_->dists[t].atoms[atom.weight_atom].weights[j];
        uint64_t next = state | (VertexMask(1) << u) | (VertexMask(1) << v);
        out.push_back({p, ElemMask(1) << e, gain, next});
        none_prob -= p;
    }
    if (none_prob < 0)
        throw ContractError("fractional selection probabilities exceed 1");
    if (none_prob > 0 || out.empty()) out.push_back({none_prob, 0, Rat(0), state});
}

// ---------------------------------------------------------------------------
// Edge arrival
// ---------------------------------------------------------------------------

namespace {

void check_edge_order(const Graph& g, const std::vector<int>& edge_order) {
    if (static_cast<int>(edge_order.size()) != g.edge_count())
        throw std::domain_error("edge order length mismatch");
    if (g.edge_count() > 22) throw CapacityError("edge OCRS cap exceeded: needs |E| <= 22");
}

}  // namespace

EdgeAlphaResult edge_alphas_exact(const Graph& g, const std::vector<int>& edge_order,
                                  const std::vector<Rat>& x, const Rat& c) {
    check_edge_order(g, edge_order);
    EdgeAlphaResult out;
    std::map<VertexMask, Rat> dist;
    dist[0] = 1;
    for (int k = 0; k < static_cast<int>(edge_order.size()); ++k) {
        int e = edge_order[k];
        int u = g.edges[e].u, v = g.edges[e].v;
        Rat p_free = 0;
        for (const auto& [mask, p] : dist)
            if (!((mask >> u) & 1) && !((mask >> v) & 1)) p_free += p;
        out.p_unmatched.push_back(p_free);
        Rat alpha;
        if (p_free <= 0 || c / p_free > 1) {
            if (out.certified) {
                out.certified = false;
                out.first_offender = k;
            }
            alpha = p_free <= 0 ? Rat(1) : Rat(c / p_free);
            out.alpha.push_back(alpha);
            alpha = 1;  // clamp so the scan can continue
        } else {
            alpha = c / p_free;
            out.alpha.push_back(alpha);
        }
        Rat a = alpha * x[e];
        if (a == 0) continue;
        std::map<VertexMask, Rat> next;
        VertexMask both = (VertexMask(1) << u) | (VertexMask(1) << v);
        for (const auto& [mask, p] : dist) {
            if (!(mask & both)) {
                next[mask | both] += p * a;
                Rat stay = p * (Rat(1) - a);
                if (stay != 0) next[mask] += stay;
            } else {
                next[mask] += p;
            }
        }
        dist.swap(next);
    }
    return out;
}

Rat unmatched_prob_exact(const Graph& g, const std::vector<int>& edge_order,
                         const std::vector<Rat>& x, const Rat& c, int prefix_len) {
    if (prefix_len < 0 || prefix_len >= static_cast<int>(edge_order.size()))
        throw std::domain_error("prefix length out of range");
    EdgeAlphaResult res = edge_alphas_exact(g, edge_order, x, c);
    return res.p_unmatched[prefix_len];
}

McEstimate unmatched_prob_mc(const Graph& g, const std::vector<int>& edge_order,
                             const std::vector<Rat>& x, const Rat& c, int prefix_len, uint64_t n,
                             uint64_t seed) {
    if (n < 1) throw std::domain_error("n >= 1 required");
    EdgeAlphaResult res = edge_alphas_exact(g, edge_order, x, c);
    int e = edge_order[prefix_len];
    int u = g.edges[e].u, v = g.edges[e].v;
    std::vector<double> act(prefix_len);
    for (int k = 0; k < prefix_len; ++k)
        act[k] = rat_d(res.alpha[k] >= 1 ? Rat(1) : res.alpha[k]) * rat_d(x[edge_order[k]]);
    uint64_t hits = 0;
    for (uint64_t trial = 0; trial < n; ++trial) {
        RngStream rng = stream_for(seed, trial, 0);
        VertexMask matched = 0;
        for (int k = 0; k < prefix_len; ++k) {
            int f = edge_order[k];
            bool active = rng.next_double() < act[k];
            if (!active) continue;
            VertexMask both = (VertexMask(1) << g.edges[f].u) | (VertexMask(1) << g.edges[f].v);
            if (!(matched & both)) matched |= both;
        }
        if (!((matched >> u) & 1) && !((matched >> v) & 1)) ++hits;
    }
    McEstimate out;
    out.n = n;
    out.seed = seed;
    out.value = static_cast<double>(hits) / static_cast<double>(n);
    out.ci_halfwidth =
        1.959963984540054 * std::sqrt(out.value * (1 - out.value) / static_cast<double>(n));
    out.diagnostic = out.value < rat_d(c);
    return out;
}

EdgeAlphaMc edge_alphas_mc(const Graph& g, const std::vector<int>& edge_order,
                           const std::vector<Rat>& x, const Rat& c, uint64_t n, uint64_t seed) {
    check_edge_order(g, edge_order);
    EdgeAlphaMc out;
    const double cd = rat_d(c);
    std::vector<double> act;
    for (int k = 0; k < static_cast<int>(edge_order.size()); ++k) {
        uint64_t hits = 0;
        int e = edge_order[k];
        int u = g.edges[e].u, v = g.edges[e].v;
        for (uint64_t trial = 0; trial < n; ++trial) {
            RngStream rng = stream_for(seed, trial, static_cast<uint64_t>(k));
            VertexMask matched = 0;
            for (int j = 0; j < k; ++j) {
                int f = edge_order[j];
                bool active = rng.next_double() < act[j] * rat_d(x[f]);
                if (!active) continue;
                VertexMask both =
                    (VertexMask(1) << g.edges[f].u) | (VertexMask(1) << g.edges[f].v);
                if (!(matched & both)) matched |= both;
            }
            if (!((matched >> u) & 1) && !((matched >> v) & 1)) ++hits;
        }
        double p_hat = static_cast<double>(hits) / static_cast<double>(n);
        out.p_unmatched.push_back(p_hat);
        double alpha = p_hat > 0 ? cd / p_hat : 2.0;
        if (alpha > 1.0) {
            ++out.clamp_events;
            alpha = 1.0;
        }
        out.alpha.push_back(alpha);
        act.push_back(alpha);
    }
    return out;
}

EdgeOcrsProcess::EdgeOcrsProcess(const Graph& g, const IntegralScheme& scheme,
                                 const OcrsConstant& c, const Instance* inst)
    : g_(g), scheme_(scheme), inst_(inst) {
    std::vector<int> order;
    for (std::size_t t = 0; t < scheme.batches.size(); ++t) {
        if (scheme.batches[t].size() != 1)
            throw ContractError("edge OCRS requires singleton batches");
        order.push_back(scheme.batches[t][0]);
        edge_of_batch_.push_back(scheme.batches[t][0]);
    }
    alphas_ = edge_alphas_exact(g, order, scheme.marginals, c.c);
    if (!alphas_.certified) {
        int k = alphas_.first_offender;
        throw CertificationError(
            "alpha exceeds 1 at arrival position " + std::to_string(k) + " (edge " +
                std::to_string(order[k]) + "): Pr[unmatched] = " + rat_str(alphas_.p_unmatched[k]) +
                " < c = " + rat_str(c.c),
            k);
    }
    scenarios_.resize(scheme.atoms.size());
    for (std::size_t t = 0; t < scheme.atoms.size(); ++t)
        for (std::size_t a = 0; a < scheme.atoms[t].size(); ++a)
            scenarios_[t].push_back({scheme.atoms[t][a].prob, static_cast<int>(a)});
}

int EdgeOcrsProcess::num_steps() const { return static_cast<int>(scheme_.atoms.size()); }

ElemMask EdgeOcrsProcess::scenario_elements(int t, int scenario_id) const {
    return scheme_.atoms[t][scenario_id].realized;
}

void EdgeOcrsProcess::step(int t, int scenario_id, uint64_t state,
                           std::vector<ProcBranch>& out) const {
    out.clear();
    const SchemeAtom& atom = scheme_.atoms[t][scenario_id];
    VertexMask matched = static_cast<VertexMask>(state);
    int e = edge_of_batch_[t];
    VertexMask both = (VertexMask(1) << g_.edges[e].u) | (VertexMask(1) << g_.edges[e].v);
    if (atom.realized == 0 || (matched & both)) {
        out.push_back({Rat(1), 0, Rat(0), state});
        return;
    }
    Rat gain(0);
    if (inst_ && atom.weight_atom >= 0)
        gain = inst_->dists[t].atoms[atom.weight_atom].weights[0];
    const Rat& a = alphas_.alpha[t];
    out.push_back({a, ElemMask(1) << e, gain, state | both});
    if (a != 1) out.push_back({Rat(1) - a, 0, Rat(0), state});
}

GapCheckResult active_edge_gap_check(const Graph& g, const std::vector<int>& edge_order,
                                     const std::vector<Rat>& x, const OcrsConstant& c, int vertex,
                                     uint64_t n, uint64_t seed) {
    EdgeAlphaResult res = edge_alphas_exact(g, edge_order, x, c.c);
    std::vector<double> act;
    std::vector<int> incident;
    for (int k = 0; k < static_cast<int>(edge_order.size()); ++k) {
        int e = edge_order[k];
        if (g.edges[e].u == vertex || g.edges[e].v == vertex) {
            incident.push_back(e);
            Rat a = res.alpha[k] > 1 ? Rat(1) : res.alpha[k];
            act.push_back(rat_d(a) * rat_d(x[e]));
        }
    }
    uint64_t hits = 0;
    for (uint64_t trial = 0; trial < n; ++trial) {
        RngStream rng = stream_for(seed, trial, 0);
        bool any = false;
        for (double a : act)
            if (rng.next_double() < a) any = true;
        if (!any) ++hits;
    }
    GapCheckResult out;
    out.p_hat = static_cast<double>(hits) / static_cast<double>(n);
    out.bound = rat_d(lemma_gap_bound(c.c));
    out.sigma = std::sqrt(out.p_hat * (1 - out.p_hat) / static_cast<double>(n));
    out.ok = out.p_hat >= out.bound - 5 * out.sigma;
    return out;
}

}  // namespace pm
