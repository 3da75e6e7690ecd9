#include "prophetmatch/estimation.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include "prophetmatch/rng.hpp"

namespace pm {

ElemMask BranchingProcess::scenario_elements(int, int) const { return 0; }

namespace {

struct ForwardSweep {
    Rat total_gain = 0;
    uint64_t branches = 0;
    SelectabilityResult sel;
};

ForwardSweep run_sweep(const BranchingProcess& p, uint64_t cap, bool with_selectability,
                       int num_elements) {
    ForwardSweep out;
    if (with_selectability) out.sel.pr_selected.assign(num_elements, Rat(0));
    std::map<uint64_t, Rat> dist;
    dist[p.initial_state()] = 1;
    std::vector<ProcBranch> buf;
    for (int t = 0; t < p.num_steps(); ++t) {
        std::map<uint64_t, Rat> next;
        const std::vector<Scenario>& scs = p.scenarios(t);
        for (const Scenario& sc : scs) {
            // Per-element selection mass conditioned on this scenario.
            std::map<int, Rat> cond;
            for (const auto& [state, ps] : dist) {
                p.step(t, sc.id, state, buf);
                for (const ProcBranch& br : buf) {
                    if (++out.branches > cap)
                        throw CapacityError("exact enumeration branching cap exceeded at " +
                                            std::to_string(out.branches) + " branches");
                    if (br.prob == 0) continue;
                    Rat w = ps * br.prob;
                    out.total_gain += w * sc.prob * br.gain;
                    next[br.next] += w * sc.prob;
                    if (with_selectability && br.selected) {
                        for (uint32_t m = br.selected; m; m &= m - 1) cond[lowest_bit(m)] += w;
                    }
                }
            }
            if (with_selectability) {
                ElemMask realized = p.scenario_elements(t, sc.id);
                for (uint32_t m = realized; m; m &= m - 1) {
                    int e = lowest_bit(m);
                    Rat q = cond.count(e) ? cond[e] : Rat(0);
                    out.sel.entries.push_back({t, sc.id, e, q});
                    if (!out.sel.min_conditional || q < *out.sel.min_conditional)
                        out.sel.min_conditional = q;
                }
                for (const auto& [e, q] : cond) out.sel.pr_selected[e] += sc.prob * q;
            }
        }
        dist.swap(next);
    }
    return out;
}

}  // namespace

ExactValue exact_expectation(const BranchingProcess& p, uint64_t branching_cap) {
    ForwardSweep sweep = run_sweep(p, branching_cap, false, 0);
    return {sweep.total_gain, sweep.branches};
}

SelectabilityResult exact_selectability(const BranchingProcess& p, int num_elements,
                                        uint64_t branching_cap) {
    ForwardSweep sweep = run_sweep(p, branching_cap, true, num_elements);
    sweep.sel.expected_gain = sweep.total_gain;
    sweep.sel.branch_count = sweep.branches;
    return sweep.sel;
}

void Welford::add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
}

void Welford::merge(const Welford& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    double d = other.mean - mean;
    uint64_t total = n + other.n;
    m2 += other.m2 + d * d * static_cast<double>(n) * static_cast<double>(other.n) /
                         static_cast<double>(total);
    mean += d * static_cast<double>(other.n) / static_cast<double>(total);
    n = total;
}

int mc_worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    int workers = std::min(hw > 0 ? hw : 1, 8);
    if (const char* env = std::getenv("PROPHET_MATCH_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) workers = std::min(v, 64);
    }
    return workers;
}

ExpectationResult mc_expectation(const std::function<double(uint64_t, uint64_t)>& trial,
                                 uint64_t n, uint64_t seed) {
    if (n < 2) throw std::domain_error("mc_expectation requires n >= 2");
    // Shard layout is fixed; trial indices are globally numbered so the
    // estimate is independent of the worker count.
    std::vector<Welford> shard_stats(kMcShards);
    std::atomic<uint64_t> next_shard{0};
    auto work = [&]() {
        for (;;) {
            uint64_t s = next_shard.fetch_add(1);
            if (s >= kMcShards) return;
            uint64_t lo = n * s / kMcShards;
            uint64_t hi = n * (s + 1) / kMcShards;
            Welford w;
            for (uint64_t i = lo; i < hi; ++i) w.add(trial(seed, i));
            shard_stats[s] = w;
        }
    };
    int workers = std::min<int>(mc_worker_count(), static_cast<int>(kMcShards));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    Welford total;
    for (const Welford& w : shard_stats) total.merge(w);
    ExpectationResult out;
    out.exact = false;
    out.estimate = total.mean;
    out.stddev = std::sqrt(total.variance());
    out.ci_halfwidth = 1.959963984540054 * out.stddev / std::sqrt(static_cast<double>(total.n));
    out.sample_count = total.n;
    out.seed = seed;
    return out;
}

}  // namespace pm
