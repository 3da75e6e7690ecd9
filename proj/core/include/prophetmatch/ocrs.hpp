#pragma once

#include <optional>
#include <vector>

#include "prophetmatch/estimation.hpp"
#include "prophetmatch/sampling.hpp"

namespace pm {

// ---------------------------------------------------------------------------
// Selection constants. Values are derived at startup by exact bisection, never
// hardcoded as decimal literals; the provenance tag travels with the value.
// ---------------------------------------------------------------------------

enum class CProvenance { Warmup, IndependentRoot, ImprovedRoot };

struct OcrsConstant {
    Rat c;
    CProvenance provenance = CProvenance::Warmup;
};

// g(c) = 1 - 2c + (c^2/2) * ((1-2c)/(1-c))^2 - c
Rat improved_equation_residual(const Rat& c);
// h(c) = 1 - 2c + c^2 - c
Rat independent_equation_residual(const Rat& c);
// (1-2c)/(1-c), the per-vertex no-active-edge bound
Rat lemma_gap_bound(const Rat& c);

OcrsConstant ocrs_warmup();  // exactly 1/3
// Root of h on (0, 1/2), i.e. (3-sqrt(5))/2, bisected to `precision`.
OcrsConstant solve_independent_c(double precision = 1e-12);
// Root of g on (0, 1/2), approximately 0.337..., bisected to `precision`.
OcrsConstant solve_improved_c(double precision = 1e-12);

// ---------------------------------------------------------------------------
// Vertex arrival (integral and fractional 1/2-selectable schemes)
// ---------------------------------------------------------------------------

// alpha_u(v) = 1 / (2 - sum_{z before v} x_uz), for u arrived before v.
// Requires per-vertex degree sums of x at most 1.
class VertexAlphaTable {
public:
    VertexAlphaTable(const Graph& g, const std::vector<int>& vertex_order,
                     const std::vector<Rat>& x);
    // Alpha of candidate u at arrival time t (the batch index).
    const Rat& alpha_at(int u, int t) const { return alpha_.at(t).at(u); }
    int arrival_position(int v) const { return pos_.at(v); }

private:
    std::vector<int> pos_;
    std::vector<std::vector<Rat>> alpha_;  // [t][u]
};

// Standalone form of the same quantity for vertices u, v (u before v).
Rat vertex_alpha(const Graph& g, const std::vector<int>& vertex_order, const std::vector<Rat>& x,
                 int u, int v);

// Raised when a realization stream violates an OCRS precondition.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact process of Algorithm "match (uv) in R_v with prob alpha_u(v) if u is
// unmatched". States are matched-vertex masks. When `inst` is given, gains
// are the realized batch weights (the reduction's value accounting).
class VertexOcrsProcess : public BranchingProcess {
public:
    VertexOcrsProcess(const Graph& g, const std::vector<int>& vertex_order,
                      const IntegralScheme& scheme, const Instance* inst = nullptr);
    int num_steps() const override;
    uint64_t initial_state() const override { return 0; }
    const std::vector<Scenario>& scenarios(int t) const override { return scenarios_[t]; }
    void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const override;
    ElemMask scenario_elements(int t, int scenario_id) const override;

private:
    const Graph& g_;
    const IntegralScheme& scheme_;
    const Instance* inst_;
    VertexAlphaTable alphas_;
    std::vector<int> order_;
    std::vector<std::vector<Scenario>> scenarios_;
    Rat gain_of(int t, int scenario_id, int e) const;
};

// Fractional variant: at v, select one unmatched u (or none) with probability
// r^v_(uv) * alpha_u(v).
class FracVertexOcrsProcess : public BranchingProcess {
public:
    FracVertexOcrsProcess(const Graph& g, const std::vector<int>& vertex_order,
                          const FractionalScheme& scheme, const Instance* inst = nullptr);
    int num_steps() const override;
    uint64_t initial_state() const override { return 0; }
    const std::vector<Scenario>& scenarios(int t) const override { return scenarios_[t]; }
    void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const override;
    ElemMask scenario_elements(int t, int scenario_id) const override;

private:
    const Graph& g_;
    const FractionalScheme& scheme_;
    const Instance* inst_;
    VertexAlphaTable alphas_;
    std::vector<int> order_;
    std::vector<std::vector<Scenario>> scenarios_;
};

// ---------------------------------------------------------------------------
// Edge arrival: the c-OCRS with alpha_e = c / Pr[u, v unmatched at e]
// ---------------------------------------------------------------------------

// Raised when the exact oracle certifies alpha > 1 for the requested c.
struct CertificationError : std::runtime_error {
    int arrival_position;
    CertificationError(const std::string& msg, int pos)
        : std::runtime_error(msg), arrival_position(pos) {}
};

struct EdgeAlphaResult {
    std::vector<Rat> alpha;        // per arrival position; an offending entry may exceed 1
    std::vector<Rat> p_unmatched;  // Pr[both endpoints unmatched at the edge]
    bool certified = true;
    int first_offender = -1;       // arrival position of the first alpha > 1
};

// Exact alphas by forward recursion over matched-vertex states weighted by
// activation probabilities (edges activate independently with alpha_e * x_e;
// active edges are matched greedily in arrival order). Cap: |E| <= 22.
EdgeAlphaResult edge_alphas_exact(const Graph& g, const std::vector<int>& edge_order,
                                  const std::vector<Rat>& x, const Rat& c);

// Pr[u, v unmatched at e] for the edge at `prefix_len` in the order.
Rat unmatched_prob_exact(const Graph& g, const std::vector<int>& edge_order,
                         const std::vector<Rat>& x, const Rat& c, int prefix_len);

struct McEstimate {
    double value = 0;
    double ci_halfwidth = 0;
    uint64_t n = 0;
    uint64_t seed = 0;
    bool diagnostic = false;  // estimate crossed a bound it should not
};

McEstimate unmatched_prob_mc(const Graph& g, const std::vector<int>& edge_order,
                             const std::vector<Rat>& x, const Rat& c, int prefix_len, uint64_t n,
                             uint64_t seed);

// Monte-Carlo alpha oracle: estimates each P_e by simulating the prefix with
// previously estimated alphas; estimates above 1 are clamped and counted as
// diagnostics rather than aborting.
struct EdgeAlphaMc {
    std::vector<double> alpha;
    std::vector<double> p_unmatched;
    int clamp_events = 0;
};
EdgeAlphaMc edge_alphas_mc(const Graph& g, const std::vector<int>& edge_order,
                           const std::vector<Rat>& x, const Rat& c, uint64_t n, uint64_t seed);

// Exact edge-arrival OCRS process over a scheme whose batches are singleton
// edges (marginals x must match the scheme). Throws CertificationError when
// the exact oracle reports alpha > 1 for the requested constant.
class EdgeOcrsProcess : public BranchingProcess {
public:
    EdgeOcrsProcess(const Graph& g, const IntegralScheme& scheme, const OcrsConstant& c,
                    const Instance* inst = nullptr);
    int num_steps() const override;
    uint64_t initial_state() const override { return 0; }
    const std::vector<Scenario>& scenarios(int t) const override { return scenarios_[t]; }
    void step(int t, int scenario_id, uint64_t state, std::vector<ProcBranch>& out) const override;
    ElemMask scenario_elements(int t, int scenario_id) const override;
    const EdgeAlphaResult& alphas() const { return alphas_; }

private:
    const Graph& g_;
    const IntegralScheme& scheme_;
    const Instance* inst_;
    std::vector<int> edge_of_batch_;
    EdgeAlphaResult alphas_;
    std::vector<std::vector<Scenario>> scenarios_;
};

// Empirical check of the per-vertex no-active-edge bound: estimates
// Pr[no edge incident to r is active] and compares against
// (1-2c)/(1-c) - 5 sigma.
struct GapCheckResult {
    bool ok = false;
    double p_hat = 0;
    double bound = 0;
    double sigma = 0;
};
GapCheckResult active_edge_gap_check(const Graph& g, const std::vector<int>& edge_order,
                                     const std::vector<Rat>& x, const OcrsConstant& c, int vertex,
                                     uint64_t n, uint64_t seed);

}  // namespace pm
