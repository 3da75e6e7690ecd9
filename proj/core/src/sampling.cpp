#include "prophetmatch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pm {

void IntegralScheme::recompute_marginals() {
    marginals.assign(num_elements, Rat(0));
    for (const auto& batch_atoms : atoms)
        for (const SchemeAtom& a : batch_atoms)
            for (uint32_t m = a.realized; m; m &= m - 1) marginals[lowest_bit(m)] += a.prob;
}

int IntegralScheme::max_realized_size() const {
    int mx = 0;
    for (const auto& batch_atoms : atoms)
        for (const SchemeAtom& a : batch_atoms) mx = std::max(mx, popcount(a.realized));
    return mx;
}

void FractionalScheme::recompute_marginals() {
    marginals.assign(num_elements, Rat(0));
    for (std::size_t t = 0; t < atoms.size(); ++t)
        for (const FracSchemeAtom& a : atoms[t])
            for (std::size_t j = 0; j < batches[t].size(); ++j)
                marginals[batches[t][j]] += a.prob * a.r[j];
}

SampledWeights sample_weights(const Instance& inst, RngStream& rng) {
    SampledWeights out;
    out.w.assign(inst.num_elements(), Rat(0));
    out.atom.resize(inst.num_batches());
    for (int t = 0; t < inst.num_batches(); ++t) {
        int a = inst.dists[t].sample(rng);
        out.atom[t] = a;
        for (std::size_t j = 0; j < inst.batches[t].size(); ++j)
            out.w[inst.batches[t][j]] = inst.dists[t].atoms[a].weights[j];
    }
    return out;
}

MatchingResult instance_opt(const Instance& inst, const Weights& w) {
    if (inst.family_mode()) return max_weight_feasible_set(*inst.family, w);
    return max_weight_matching(inst.graph, w);
}

namespace {

// Pre-scaled atom weights for fast OPT calls inside enumeration and MC loops.
struct ScaledAtoms {
    bool ok = false;
    std::vector<std::vector<std::vector<long long>>> w;  // [batch][atom][local]
};

ScaledAtoms scale_instance(const Instance& inst) {
    std::vector<Rat> all;
    for (const auto& d : inst.dists)
        for (const Atom& a : d.atoms)
            for (const Rat& w : a.weights) all.push_back(w);
    mpz_class scale = denominator_lcm(all);
    ScaledAtoms out;
    out.w.resize(inst.num_batches());
    for (int t = 0; t < inst.num_batches(); ++t) {
        for (const Atom& a : inst.dists[t].atoms) {
            auto scaled = scale_to_int64(a.weights, scale);
            if (!scaled) return out;  // ok = false
            out.w[t].push_back(std::move(*scaled));
        }
    }
    out.ok = true;
    return out;
}

// Shared enumeration core: assembles int64 weights when possible alongside
// the exact rationals.
struct JointEnumerator {
    const Instance& inst;
    ScaledAtoms scaled;
    std::vector<int> idx;
    Weights w;
    std::vector<long long> wi;

    explicit JointEnumerator(const Instance& i) : inst(i), scaled(scale_instance(i)) {
        idx.assign(inst.num_batches(), 0);
        w.assign(inst.num_elements(), Rat(0));
        wi.assign(inst.num_elements(), 0);
    }

    template <class Fn>
    void run(unsigned long long cap, Fn&& fn) {
        if (inst.joint_support_size() > cap)
            throw CapacityError("joint support exceeds enumeration cap of " + std::to_string(cap));
        rec(0, Rat(1), fn);
    }

    template <class Fn>
    void rec(int t, const Rat& prob, Fn& fn) {
        if (t == inst.num_batches()) {
            fn(idx, prob, w, scaled.ok ? &wi : nullptr);
            return;
        }
        for (std::size_t a = 0; a < inst.dists[t].atoms.size(); ++a) {
            idx[t] = static_cast<int>(a);
            const Atom& atom = inst.dists[t].atoms[a];
            for (std::size_t j = 0; j < inst.batches[t].size(); ++j) {
                int e = inst.batches[t][j];
                w[e] = atom.weights[j];
                if (scaled.ok) wi[e] = scaled.w[t][a][j];
            }
            rec(t + 1, Rat(prob * atom.prob), fn);
        }
    }
};

ElemMask batch_mask(const Instance& inst, int t) {
    ElemMask m = 0;
    for (int e : inst.batches[t]) m |= ElemMask(1) << e;
    return m;
}

}  // namespace

void for_each_joint_atom(
    const Instance& inst, unsigned long long support_cap,
    const std::function<void(const std::vector<int>&, const Rat&, const Weights&)>& fn) {
    JointEnumerator en(inst);
    en.run(support_cap,
           [&](const std::vector<int>& idx, const Rat& p, const Weights& w,
               const std::vector<long long>*) { fn(idx, p, w); });
}

ElemMask realize_opt_batch(const Instance& inst, int t, int observed_atom, RngStream& rng) {
    if (t < 0 || t >= inst.num_batches()) throw std::domain_error("batch index out of range");
    if (observed_atom < 0 || observed_atom >= static_cast<int>(inst.dists[t].atoms.size()))
        throw std::domain_error("observed atom out of range");
    Weights w(inst.num_elements(), Rat(0));
    auto put = [&](int s, int a) {
        for (std::size_t j = 0; j < inst.batches[s].size(); ++j)
            w[inst.batches[s][j]] = inst.dists[s].atoms[a].weights[j];
    };
    put(t, observed_atom);
    for (int s = 0; s < inst.num_batches(); ++s) {
        if (s == t) continue;
        put(s, inst.dists[s].sample(rng));
    }
    return instance_opt(inst, w).edges & batch_mask(inst, t);
}

std::vector<Rat> realize_fopt_batch(const Instance& inst, int t, int observed_atom,
                                    RngStream& rng) {
    if (inst.family_mode()) throw std::domain_error("fractional optimum requires a graph instance");
    if (t < 0 || t >= inst.num_batches()) throw std::domain_error("batch index out of range");
    Weights w(inst.num_elements(), Rat(0));
    auto put = [&](int s, int a) {
        for (std::size_t j = 0; j < inst.batches[s].size(); ++j)
            w[inst.batches[s][j]] = inst.dists[s].atoms[a].weights[j];
    };
    put(t, observed_atom);
    for (int s = 0; s < inst.num_batches(); ++s) {
        if (s == t) continue;
        put(s, inst.dists[s].sample(rng));
    }
    FractionalMatching f = fractional_matching_opt(inst.graph, w);
    std::vector<Rat> r;
    r.reserve(inst.batches[t].size());
    for (int e : inst.batches[t]) r.push_back(f.y[e]);
    return r;
}

IntegralScheme exact_opt_scheme(const Instance& inst, unsigned long long support_cap) {
    IntegralScheme scheme;
    scheme.num_elements = inst.num_elements();
    scheme.batches = inst.batches;
    scheme.atoms.resize(inst.num_batches());
    std::vector<std::map<std::pair<int, ElemMask>, Rat>> acc(inst.num_batches());
    std::vector<ElemMask> bmask(inst.num_batches());
    for (int t = 0; t < inst.num_batches(); ++t) bmask[t] = batch_mask(inst, t);

    JointEnumerator en(inst);
    std::optional<Int64MatchingSolver> fast;
    if (!inst.family_mode() && en.scaled.ok && inst.graph.vertex_count <= 20)
        fast.emplace(inst.graph);
    en.run(support_cap, [&](const std::vector<int>& idx, const Rat& p, const Weights& w,
                            const std::vector<long long>* wi) {
        ElemMask opt = (fast && wi) ? fast->solve(*wi) : instance_opt(inst, w).edges;
        for (int t = 0; t < inst.num_batches(); ++t) acc[t][{idx[t], opt & bmask[t]}] += p;
    });
    for (int t = 0; t < inst.num_batches(); ++t)
        for (const auto& [key, prob] : acc[t])
            scheme.atoms[t].push_back({prob, key.second, key.first});
    scheme.recompute_marginals();
    return scheme;
}

FractionalScheme exact_fopt_scheme(const Instance& inst, unsigned long long support_cap) {
    if (inst.family_mode()) throw std::domain_error("fractional optimum requires a graph instance");
    FractionalScheme scheme;
    scheme.num_elements = inst.num_elements();
    scheme.batches = inst.batches;
    scheme.atoms.resize(inst.num_batches());
    // Keys hold 2*y restricted to the batch (half-integrality keeps them small).
    std::vector<std::map<std::pair<int, std::vector<int>>, Rat>> acc(inst.num_batches());

    JointEnumerator en(inst);
    std::optional<Int64FractionalSolver> fast;
    if (en.scaled.ok && inst.graph.vertex_count <= 10) fast.emplace(inst.graph);
    en.run(support_cap, [&](const std::vector<int>& idx, const Rat& p, const Weights& w,
                            const std::vector<long long>* wi) {
        std::vector<int> doubled;
        if (fast && wi) {
            doubled = fast->solve_doubled(*wi);
        } else {
            FractionalMatching f = fractional_matching_opt(inst.graph, w);
            doubled.resize(f.y.size());
            for (std::size_t e = 0; e < f.y.size(); ++e) {
                Rat d = f.y[e] * 2;
                doubled[e] = static_cast<int>(d.get_num().get_si());
            }
        }
        for (int t = 0; t < inst.num_batches(); ++t) {
            std::vector<int> local;
            local.reserve(inst.batches[t].size());
            for (int e : inst.batches[t]) local.push_back(doubled[e]);
            acc[t][{idx[t], std::move(local)}] += p;
        }
    });
    const Rat half(1, 2);
    for (int t = 0; t < inst.num_batches(); ++t)
        for (const auto& [key, prob] : acc[t]) {
            FracSchemeAtom a;
            a.prob = prob;
            a.weight_atom = key.first;
            for (int d : key.second) a.r.push_back(Rat(d) * half);
            scheme.atoms[t].push_back(std::move(a));
        }
    scheme.recompute_marginals();
    return scheme;
}

std::vector<Rat> exact_marginals(const Instance& inst, MarginalMode mode,
                                 unsigned long long support_cap) {
    if (mode == MarginalMode::Opt) return exact_opt_scheme(inst, support_cap).marginals;
    return exact_fopt_scheme(inst, support_cap).marginals;
}

McMarginals mc_marginals(const Instance& inst, MarginalMode mode, uint64_t n, uint64_t seed) {
    if (n < 1) throw std::domain_error("mc_marginals requires n >= 1");
    const int m = inst.num_elements();
    ScaledAtoms scaled = scale_instance(inst);
    std::optional<Int64MatchingSolver> fast_match;
    std::optional<Int64FractionalSolver> fast_frac;
    if (!inst.family_mode() && scaled.ok) {
        if (mode == MarginalMode::Opt && inst.graph.vertex_count <= 20)
            fast_match.emplace(inst.graph);
        if (mode == MarginalMode::FOpt && inst.graph.vertex_count <= 10)
            fast_frac.emplace(inst.graph);
    }
    std::vector<CategoricalSampler> samplers;
    for (const auto& d : inst.dists) {
        std::vector<Rat> probs;
        for (const Atom& a : d.atoms) probs.push_back(a.prob);
        samplers.emplace_back(probs);
    }
    std::vector<Welford> stats(m);
    std::vector<long long> wi(m, 0);
    Weights w(m, Rat(0));
    for (uint64_t trial = 0; trial < n; ++trial) {
        RngStream rng = stream_for(seed, trial, 0);
        for (int t = 0; t < inst.num_batches(); ++t) {
            std::size_t a = samplers[t].draw(rng);
            if (a >= inst.dists[t].atoms.size()) a = inst.dists[t].atoms.size() - 1;
            for (std::size_t j = 0; j < inst.batches[t].size(); ++j) {
                int e = inst.batches[t][j];
                if (scaled.ok) wi[e] = scaled.w[t][a][j];
                w[e] = inst.dists[t].atoms[a].weights[j];
            }
        }
        if (mode == MarginalMode::Opt) {
            ElemMask opt = (fast_match && scaled.ok) ? fast_match->solve(wi)
                                                     : instance_opt(inst, w).edges;
            for (int e = 0; e < m; ++e) stats[e].add((opt >> e) & 1 ? 1.0 : 0.0);
        } else {
            if (fast_frac && scaled.ok) {
                std::vector<int> doubled = fast_frac->solve_doubled(wi);
                for (int e = 0; e < m; ++e) stats[e].add(0.5 * doubled[e]);
            } else {
                FractionalMatching f = fractional_matching_opt(inst.graph, w);
                for (int e = 0; e < m; ++e) stats[e].add(rat_d(f.y[e]));
            }
        }
    }
    McMarginals out;
    out.n = n;
    out.seed = seed;
    out.x.resize(m);
    out.ci_halfwidth.resize(m);
    for (int e = 0; e < m; ++e) {
        out.x[e] = stats[e].mean;
        out.ci_halfwidth[e] =
            1.959963984540054 * std::sqrt(stats[e].variance() / static_cast<double>(n));
    }
    return out;
}

Rat expected_opt_value(const Instance& inst, unsigned long long support_cap) {
    Rat total = 0;
    JointEnumerator en(inst);
    std::optional<Int64MatchingSolver> fast;
    if (!inst.family_mode() && en.scaled.ok && inst.graph.vertex_count <= 20)
        fast.emplace(inst.graph);
    en.run(support_cap, [&](const std::vector<int>&, const Rat& p, const Weights& w,
                            const std::vector<long long>* wi) {
        if (fast && wi) {
            total += p * weight_of_mask(w, fast->solve(*wi));
        } else {
            total += p * instance_opt(inst, w).value;
        }
    });
    return total;
}

Rat expected_fopt_value(const Instance& inst, unsigned long long support_cap) {
    if (inst.family_mode()) throw std::domain_error("fractional optimum requires a graph instance");
    Rat total = 0;
    JointEnumerator en(inst);
    std::optional<Int64FractionalSolver> fast;
    if (en.scaled.ok && inst.graph.vertex_count <= 10) fast.emplace(inst.graph);
    const Rat half(1, 2);
    en.run(support_cap, [&](const std::vector<int>&, const Rat& p, const Weights& w,
                            const std::vector<long long>* wi) {
        if (fast && wi) {
            std::vector<int> doubled = fast->solve_doubled(*wi);
            Rat v = 0;
            for (std::size_t e = 0; e < doubled.size(); ++e)
                if (doubled[e]) v += w[e] * Rat(doubled[e]) * half;
            total += p * v;
        } else {
            total += p * fractional_matching_opt(inst.graph, w).value;
        }
    });
    return total;
}

ExAnteSolution instance_ex_ante(const Instance& inst) {
    if (inst.family_mode()) throw std::domain_error("ex-ante relaxation requires a graph instance");
    return ex_ante_opt(inst.graph, inst.element_marginals());
}

ElemMask ex_ante_realize(const Graph& g, const Weights& w, const ExAnteSolution& sol) {
    ElemMask out = 0;
    for (int e = 0; e < g.edge_count(); ++e)
        if (w[e] >= sol.threshold[e]) out |= ElemMask(1) << e;
    return out;
}

ElemMask ex_ante_realize(const Graph& g, const Weights& w, const ExAnteSolution& sol,
                         RngStream& rng) {
    ElemMask out = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (w[e] > sol.threshold[e]) {
            out |= ElemMask(1) << e;
        } else if (w[e] == sol.threshold[e] && rng.bernoulli(sol.boundary_take[e])) {
            out |= ElemMask(1) << e;
        }
    }
    return out;
}

IntegralScheme ex_ante_scheme(const Instance& inst, const ExAnteSolution& sol) {
    if (inst.family_mode() || inst.arrival.kind != ArrivalKind::EdgeArrival)
        throw std::domain_error("ex-ante scheme requires an edge-arrival graph instance");
    IntegralScheme scheme;
    scheme.num_elements = inst.num_elements();
    scheme.batches = inst.batches;
    scheme.atoms.resize(inst.num_batches());
    for (int t = 0; t < inst.num_batches(); ++t) {
        int e = inst.batches[t][0];
        ElemMask em = ElemMask(1) << e;
        for (std::size_t a = 0; a < inst.dists[t].atoms.size(); ++a) {
            const Atom& atom = inst.dists[t].atoms[a];
            const Rat& wv = atom.weights[0];
            if (wv > sol.threshold[e]) {
                scheme.atoms[t].push_back({atom.prob, em, static_cast<int>(a)});
            } else if (wv == sol.threshold[e]) {
                Rat take = atom.prob * sol.boundary_take[e];
                if (take > 0) scheme.atoms[t].push_back({take, em, static_cast<int>(a)});
                if (atom.prob - take > 0)
                    scheme.atoms[t].push_back({Rat(atom.prob - take), 0, static_cast<int>(a)});
            } else {
                scheme.atoms[t].push_back({atom.prob, 0, static_cast<int>(a)});
            }
        }
    }
    scheme.recompute_marginals();
    return scheme;
}

}  // namespace pm
