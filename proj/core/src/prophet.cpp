#include "prophetmatch/prophet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace pm {

namespace {

Rat safe_ratio(const Rat& value, const Rat& benchmark) {
    if (benchmark == 0) return Rat(1);
    return value / benchmark;
}

std::vector<int> require_vertex_order(const Instance& inst) {
    if (inst.family_mode() || inst.arrival.kind != ArrivalKind::VertexArrival)
        throw std::domain_error("algorithm requires a vertex-arrival graph instance");
    return inst.arrival.order;
}

void require_edge_arrival(const Instance& inst) {
    if (inst.family_mode() || inst.arrival.kind != ArrivalKind::EdgeArrival)
        throw std::domain_error("algorithm requires an edge-arrival graph instance");
}

// Greedy batched selector over an explicit family: add a maximum-size subset
// of the realized elements, uniformly at random among the maximum-size
// feasible choices.
class FamilyGreedyProcess : public BranchingProcess {
public:
    FamilyGreedyProcess(const Instance& inst, const IntegralScheme& scheme)
        : inst_(inst), scheme_(scheme) {
        scenarios_.resize(scheme.atoms.size());
        for (std::size_t t = 0; t < scheme.atoms.size(); ++t)
            for (std::size_t a = 0; a < scheme.atoms[t].size(); ++a)
                scenarios_[t].push_back({scheme.atoms[t][a].prob, static_cast<int>(a)});
    }

    int num_steps() const override { return static_cast<int>(scheme_.atoms.size()); }
    uint64_t initial_state() const override { return 0; }
    const std::vector<Scenario>& scenarios(int t) const override { return scenarios_[t]; }
    ElemMask scenario_elements(int t, int s) const override {
        return scheme_.atoms[t][s].realized;
    }

    void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const override {
        out.clear();
        const SchemeAtom& atom = scheme_.atoms[t][scenario_id];
        ElemMask selected = static_cast<ElemMask>(state);
        ElemMask avail = atom.realized & ~selected;
        // All subsets of the realized set that keep the selection feasible.
        std::vector<ElemMask> best;
        int best_size = 0;
        for (ElemMask sub = avail;; sub = (sub - 1) & avail) {
            if (inst_.family->contains(selected | sub)) {
                int sz = popcount(sub);
                if (sz > best_size) {
                    best_size = sz;
                    best.clear();
                }
                if (sz == best_size) best.push_back(sub);
            }
            if (sub == 0) break;
        }
        if (best.empty()) best.push_back(0);
        Rat p(1, static_cast<unsigned long>(best.size()));
        for (ElemMask pick : best) {
            Rat gain(0);
            if (atom.weight_atom >= 0) {
                for (uint32_t m = pick; m; m &= m - 1) {
                    int e = lowest_bit(m);
                    const auto& batch = scheme_.batches[t];
                    auto it = std::find(batch.begin(), batch.end(), e);
                    gain += inst_.dists[t].atoms[atom.weight_atom].weights[it - batch.begin()];
                }
            }
            out.push_back({p, pick, gain, static_cast<uint64_t>(selected | pick)});
        }
    }

private:
    const Instance& inst_;
    const IntegralScheme& scheme_;
    std::vector<std::vector<Scenario>> scenarios_;
};

// Deterministic per-scenario baseline: take the best feasible positive-weight
// edge of the arriving batch.
class GreedyOnlineProcess : public BranchingProcess {
public:
    explicit GreedyOnlineProcess(const Instance& inst) : inst_(inst) {
        if (inst.family_mode())
            throw std::domain_error("greedy baseline requires a graph instance");
        scenarios_.resize(inst.num_batches());
        for (int t = 0; t < inst.num_batches(); ++t)
            for (std::size_t a = 0; a < inst_.dists[t].atoms.size(); ++a)
                scenarios_[t].push_back({inst_.dists[t].atoms[a].prob, static_cast<int>(a)});
    }

    int num_steps() const override { return inst_.num_batches(); }
    uint64_t initial_state() const override { return 0; }
    const std::vector<Scenario>& scenarios(int t) const override { return scenarios_[t]; }

    void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const override {
        out.clear();
        const Atom& atom = inst_.dists[t].atoms[scenario_id];
        VertexMask matched = static_cast<VertexMask>(state);
        int best = -1;
        Rat best_w(0);
        for (std::size_t j = 0; j < inst_.batches[t].size(); ++j) {
            int e = inst_.batches[t][j];
            const Edge& ed = inst_.graph.edges[e];
            if ((matched >> ed.u) & 1 || (matched >> ed.v) & 1) continue;
            if (atom.weights[j] > best_w) {
                best_w = atom.weights[j];
                best = e;
            }
        }
        if (best < 0) {
            out.push_back({Rat(1), 0, Rat(0), state});
            return;
        }
        const Edge& ed = inst_.graph.edges[best];
        uint64_t next = state | (VertexMask(1) << ed.u) | (VertexMask(1) << ed.v);
        out.push_back({Rat(1), ElemMask(1) << best, best_w, next});
    }

private:
    const Instance& inst_;
    std::vector<std::vector<Scenario>> scenarios_;
};

class PricingProcess : public BranchingProcess {
public:
    PricingProcess(const Instance& inst, const std::vector<Rat>& prices)
        : inst_(inst), prices_(prices), order_(require_vertex_order(inst)) {
        scenarios_.resize(inst.num_batches());
        for (int t = 0; t < inst.num_batches(); ++t)
            for (std::size_t a = 0; a < inst_.dists[t].atoms.size(); ++a)
                scenarios_[t].push_back({inst_.dists[t].atoms[a].prob, static_cast<int>(a)});
    }

    int num_steps() const override { return inst_.num_batches(); }
    uint64_t initial_state() const override { return 0; }
    const std::vector<Scenario>& scenarios(int t) const override { return scenarios_[t]; }

    void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const override {
        out.clear();
        const Atom& atom = inst_.dists[t].atoms[scenario_id];
        VertexMask matched = static_cast<VertexMask>(state);
        int v = order_[t];
        // k maximizing w_vk - p_k over unmatched earlier vertices; ties toward
        // the smallest vertex index.
        int best_k = -1, best_e = -1;
        Rat best_surplus(0);
        for (std::size_t j = 0; j < inst_.batches[t].size(); ++j) {
            int e = inst_.batches[t][j];
            const Edge& ed = inst_.graph.edges[e];
            int u = ed.u == v ? ed.v : ed.u;
            if ((matched >> u) & 1) continue;
            Rat surplus = atom.weights[j] - prices_[u];
            if (best_k < 0 || surplus > best_surplus ||
                (surplus == best_surplus && u < best_k)) {
                best_k = u;
                best_e = e;
                best_surplus = surplus;
            }
        }
        if (best_k >= 0 && best_surplus >= prices_[v]) {
            const Edge& ed = inst_.graph.edges[best_e];
            uint64_t next = state | (VertexMask(1) << ed.u) | (VertexMask(1) << ed.v);
            auto it = std::find(inst_.batches[t].begin(), inst_.batches[t].end(), best_e);
            Rat gain = atom.weights[it - inst_.batches[t].begin()];
            out.push_back({Rat(1), ElemMask(1) << best_e, gain, next});
            return;
        }
        out.push_back({Rat(1), 0, Rat(0), state});
    }

private:
    const Instance& inst_;
    std::vector<Rat> prices_;
    std::vector<int> order_;
    std::vector<std::vector<Scenario>> scenarios_;
};

std::vector<Rat> pricing_prices(const Instance& inst, unsigned long long cap) {
    std::vector<int> order = require_vertex_order(inst);
    std::vector<int> pos(inst.graph.vertex_count);
    for (int i = 0; i < inst.graph.vertex_count; ++i) pos[order[i]] = i;
    std::vector<Rat> prices(inst.graph.vertex_count, Rat(0));
    const Rat half(1, 2);
    for_each_joint_atom(inst, cap, [&](const std::vector<int>&, const Rat& p, const Weights& w) {
        ElemMask opt = instance_opt(inst, w).edges;
        for (uint32_t m = opt; m; m &= m - 1) {
            int e = lowest_bit(m);
            const Edge& ed = inst.graph.edges[e];
            int earlier = pos[ed.u] < pos[ed.v] ? ed.u : ed.v;
            prices[earlier] += half * p * w[e];
        }
    });
    return prices;
}

}  // namespace

ReductionOutcome prophet_via_vertex_ocrs_exact(const Instance& inst,
                                               unsigned long long support_cap) {
    std::vector<int> order = require_vertex_order(inst);
    IntegralScheme scheme = exact_opt_scheme(inst, support_cap);
    VertexOcrsProcess proc(inst.graph, order, scheme, &inst);
    ReductionOutcome out;
    out.selectability = exact_selectability(proc, inst.num_elements());
    out.alg_value = out.selectability.expected_gain;
    out.benchmark = expected_opt_value(inst, support_cap);
    out.ratio = safe_ratio(out.alg_value, out.benchmark);
    return out;
}

ReductionOutcome prophet_via_fractional_ocrs_exact(const Instance& inst,
                                                   unsigned long long support_cap) {
    std::vector<int> order = require_vertex_order(inst);
    FractionalScheme scheme = exact_fopt_scheme(inst, support_cap);
    FracVertexOcrsProcess proc(inst.graph, order, scheme, &inst);
    ReductionOutcome out;
    out.selectability = exact_selectability(proc, inst.num_elements());
    out.alg_value = out.selectability.expected_gain;
    out.benchmark = expected_fopt_value(inst, support_cap);
    out.ratio = safe_ratio(out.alg_value, out.benchmark);
    return out;
}

ReductionOutcome prophet_via_edge_ocrs_exact(const Instance& inst, const OcrsConstant& c,
                                             unsigned long long support_cap) {
    require_edge_arrival(inst);
    IntegralScheme scheme = exact_opt_scheme(inst, support_cap);
    EdgeOcrsProcess proc(inst.graph, scheme, c, &inst);
    ReductionOutcome out;
    out.selectability = exact_selectability(proc, inst.num_elements());
    out.alg_value = out.selectability.expected_gain;
    out.benchmark = expected_opt_value(inst, support_cap);
    out.ratio = safe_ratio(out.alg_value, out.benchmark);
    return out;
}

ReductionOutcome prophet_edge_ocrs_ex_ante_exact(const Instance& inst, const OcrsConstant& c) {
    require_edge_arrival(inst);
    ExAnteSolution sol = instance_ex_ante(inst);
    IntegralScheme scheme = ex_ante_scheme(inst, sol);
    EdgeOcrsProcess proc(inst.graph, scheme, c, &inst);
    ReductionOutcome out;
    out.selectability = exact_selectability(proc, inst.num_elements());
    out.alg_value = out.selectability.expected_gain;
    out.benchmark = sol.objective;
    out.ratio = safe_ratio(out.alg_value, out.benchmark);
    return out;
}

ReductionOutcome prophet_generic_family_exact(const Instance& inst,
                                              unsigned long long support_cap) {
    if (!inst.family_mode())
        throw std::domain_error("generic-family reduction requires an explicit family instance");
    IntegralScheme scheme = exact_opt_scheme(inst, support_cap);
    FamilyGreedyProcess proc(inst, scheme);
    ReductionOutcome out;
    out.selectability = exact_selectability(proc, inst.num_elements());
    out.alg_value = out.selectability.expected_gain;
    out.benchmark = expected_opt_value(inst, support_cap);
    out.ratio = safe_ratio(out.alg_value, out.benchmark);
    return out;
}

Rat greedy_online_exact(const Instance& inst, unsigned long long support_cap) {
    GreedyOnlineProcess proc(inst);
    unsigned long long branches = 1;
    for (const auto& d : inst.dists) branches *= d.atoms.size();
    if (branches > support_cap)
        throw CapacityError("joint support exceeds enumeration cap of " +
                            std::to_string(support_cap));
    return exact_expectation(proc).value;
}

PricingOutcome dynamic_pricing_exact(const Instance& inst, unsigned long long support_cap) {
    PricingOutcome out;
    out.prices = pricing_prices(inst, support_cap);
    PricingProcess proc(inst, out.prices);
    out.value = exact_expectation(proc).value;
    out.opt_value = expected_opt_value(inst, support_cap);
    out.ratio = safe_ratio(out.value, out.opt_value);
    return out;
}

Rat optimal_online_value(const Instance& inst, uint64_t state_cap) {
    const int T = inst.num_batches();
    std::vector<std::map<uint64_t, Rat>> memo(T + 1);
    uint64_t states = 0;

    // Feasible additions within a batch given the current state.
    auto additions = [&](int t, uint64_t state, std::vector<ElemMask>& out_sets) {
        out_sets.clear();
        const auto& batch = inst.batches[t];
        if (batch.size() > 20) throw CapacityError("optimal-online batch too large");
        for (std::size_t j0 = 0; j0 < (1u << batch.size()); ++j0) {
            ElemMask sub = 0;
            bool ok = true;
            if (inst.family_mode()) {
                ElemMask selected = static_cast<ElemMask>(state);
                for (std::size_t j = 0; j < batch.size(); ++j)
                    if ((j0 >> j) & 1) sub |= ElemMask(1) << batch[j];
                ok = inst.family->contains(selected | sub);
            } else {
                VertexMask used = static_cast<VertexMask>(state);
                for (std::size_t j = 0; j < batch.size() && ok; ++j) {
                    if (!((j0 >> j) & 1)) continue;
                    int e = batch[j];
                    const Edge& ed = inst.graph.edges[e];
                    VertexMask both = (VertexMask(1) << ed.u) | (VertexMask(1) << ed.v);
                    if (used & both) {
                        ok = false;
                    } else {
                        used |= both;
                        sub |= ElemMask(1) << e;
                    }
                }
            }
            if (ok) out_sets.push_back(sub);
        }
        std::sort(out_sets.begin(), out_sets.end());
        out_sets.erase(std::unique(out_sets.begin(), out_sets.end()), out_sets.end());
    };

    std::function<Rat(int, uint64_t)> value = [&](int t, uint64_t state) -> Rat {
        if (t == T) return Rat(0);
        auto it = memo[t].find(state);
        if (it != memo[t].end()) return it->second;
        if (++states > state_cap)
            throw CapacityError("optimal-online state cap exceeded at " + std::to_string(states));
        Rat total = 0;
        std::vector<ElemMask> sets;
        additions(t, state, sets);
        for (const Atom& atom : inst.dists[t].atoms) {
            Rat best(0);
            bool first = true;
            for (ElemMask sub : sets) {
                Rat gain(0);
                for (std::size_t j = 0; j < inst.batches[t].size(); ++j)
                    if ((sub >> inst.batches[t][j]) & 1) gain += atom.weights[j];
                uint64_t next_state;
                if (inst.family_mode()) {
                    next_state = state | sub;
                } else {
                    next_state = state;
                    for (uint32_t m = sub; m; m &= m - 1) {
                        const Edge& ed = inst.graph.edges[lowest_bit(m)];
                        next_state |= (VertexMask(1) << ed.u) | (VertexMask(1) << ed.v);
                    }
                }
                Rat cand = gain + value(t + 1, next_state);
                if (first || cand > best) {
                    best = cand;
                    first = false;
                }
            }
            total += atom.prob * best;
        }
        memo[t][state] = total;
        return total;
    };
    return value(0, 0);
}

// ---------------------------------------------------------------------------
// Sampled runs
// ---------------------------------------------------------------------------

ReductionSampler::ReductionSampler(const Instance& inst, ReductionKind kind, OcrsConstant c)
    : inst_(inst), kind_(kind), c_(c) {
    switch (kind) {
        case ReductionKind::VertexHalf: {
            vertex_order_ = require_vertex_order(inst);
            x_ = exact_marginals(inst, MarginalMode::Opt);
            vertex_alphas_.emplace(inst.graph, vertex_order_, x_);
            break;
        }
        case ReductionKind::FracVertex: {
            vertex_order_ = require_vertex_order(inst);
            x_ = exact_marginals(inst, MarginalMode::FOpt);
            vertex_alphas_.emplace(inst.graph, vertex_order_, x_);
            break;
        }
        case ReductionKind::EdgeC: {
            require_edge_arrival(inst);
            x_ = exact_marginals(inst, MarginalMode::Opt);
            for (int t = 0; t < inst.num_batches(); ++t)
                edge_of_batch_.push_back(inst.batches[t][0]);
            edge_alphas_ = edge_alphas_exact(inst.graph, edge_of_batch_, x_, c.c);
            if (!edge_alphas_->certified) {
                int k = edge_alphas_->first_offender;
                throw CertificationError("alpha exceeds 1 at arrival position " +
                                             std::to_string(k),
                                         k);
            }
            break;
        }
    }
}

OnlineRun ReductionSampler::run(uint64_t seed, uint64_t trial) const {
    OnlineRun run;
    RngStream wstream = stream_for(seed, trial, 0);
    SampledWeights sw = sample_weights(inst_, wstream);
    VertexMask matched = 0;
    double value = 0;
    for (int t = 0; t < inst_.num_batches(); ++t) {
        RunStep step;
        step.weight_atom = sw.atom[t];
        RngStream rng = stream_for(seed, trial, 1 + static_cast<uint64_t>(t));
        if (kind_ == ReductionKind::FracVertex) {
            std::vector<Rat> r = realize_fopt_batch(inst_, t, sw.atom[t], rng);
            for (const Rat& v : r) step.r.push_back(rat_d(v));
            int v = vertex_order_[t];
            std::vector<Rat> probs;
            std::vector<int> cands;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (r[j] == 0) continue;
                int e = inst_.batches[t][j];
                int u = inst_.graph.edges[e].u == v ? inst_.graph.edges[e].v
                                                    : inst_.graph.edges[e].u;
                if ((matched >> u) & 1) continue;
                Rat p = r[j] * vertex_alphas_->alpha_at(u, t);
                probs.push_back(p);
                cands.push_back(e);
                step.alphas.push_back(rat_d(vertex_alphas_->alpha_at(u, t)));
            }
            CategoricalSampler pick(probs);
            std::size_t choice = pick.draw(rng);
            if (choice < cands.size()) {
                int e = cands[choice];
                step.selected = ElemMask(1) << e;
                matched |= (VertexMask(1) << inst_.graph.edges[e].u) |
                           (VertexMask(1) << inst_.graph.edges[e].v);
                value += rat_d(sw.w[e]);
            }
        } else {
            ElemMask realized = realize_opt_batch(inst_, t, sw.atom[t], rng);
            step.realized = realized;
            if (realized) {
                int e = lowest_bit(realized);
                const Edge& ed = inst_.graph.edges[e];
                Rat alpha(0);
                bool cand_free = false;
                if (kind_ == ReductionKind::VertexHalf) {
                    int v = vertex_order_[t];
                    int u = ed.u == v ? ed.v : ed.u;
                    cand_free = !((matched >> u) & 1);
                    if (cand_free) alpha = vertex_alphas_->alpha_at(u, t);
                } else {
                    VertexMask both = (VertexMask(1) << ed.u) | (VertexMask(1) << ed.v);
                    cand_free = !(matched & both);
                    if (cand_free) alpha = edge_alphas_->alpha[t];
                }
                if (cand_free) {
                    step.alphas.push_back(rat_d(alpha));
                    bool take = rng.bernoulli(alpha);
                    step.coins.push_back(take ? 1 : 0);
                    if (take) {
                        step.selected = realized;
                        matched |=
                            (VertexMask(1) << ed.u) | (VertexMask(1) << ed.v);
                        value += rat_d(sw.w[e]);
                    }
                }
            }
        }
        run.steps.push_back(std::move(step));
    }
    run.value = value;
    return run;
}

ExpectationResult reduction_value_mc(const Instance& inst, ReductionKind kind, OcrsConstant c,
                                     uint64_t n, uint64_t seed) {
    ReductionSampler sampler(inst, kind, c);
    return mc_expectation(
        [&sampler](uint64_t s, uint64_t trial) { return sampler.run(s, trial).value; }, n, seed);
}

McSelectability mc_selectability(const Instance& inst, ReductionKind kind, OcrsConstant c,
                                 uint64_t n, uint64_t seed) {
    if (kind == ReductionKind::FracVertex)
        throw std::domain_error("mc selectability supports integral realizations only");
    ReductionSampler sampler(inst, kind, c);
    // occurrences and selections keyed by (t, realized set, element)
    std::map<std::pair<int, ElemMask>, uint64_t> occ;
    std::map<std::tuple<int, ElemMask, int>, uint64_t> sel;
    for (uint64_t trial = 0; trial < n; ++trial) {
        OnlineRun run = sampler.run(seed, trial);
        for (int t = 0; t < static_cast<int>(run.steps.size()); ++t) {
            const RunStep& st = run.steps[t];
            if (!st.realized) continue;
            ++occ[{t, st.realized}];
            for (uint32_t m = st.realized; m; m &= m - 1) {
                int e = lowest_bit(m);
                if ((st.selected >> e) & 1) ++sel[{t, st.realized, e}];
            }
        }
    }
    McSelectability out;
    out.n = n;
    out.seed = seed;
    for (const auto& [key, count] : occ) {
        for (uint32_t m = key.second; m; m &= m - 1) {
            int e = lowest_bit(m);
            auto it = sel.find({key.first, key.second, e});
            uint64_t hits = it == sel.end() ? 0 : it->second;
            double p = static_cast<double>(hits) / static_cast<double>(count);
            double sigma = std::sqrt(p * (1 - p) / static_cast<double>(count));
            out.entries.push_back({key.first, key.second, e, p, 1.959963984540054 * sigma, count});
            out.min_conditional = std::min(out.min_conditional, p);
        }
    }
    return out;
}

}  // namespace pm
