#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prophetmatch/batches.hpp"
#include "prophetmatch/distribution.hpp"
#include "prophetmatch/feasibility.hpp"
#include "prophetmatch/graph.hpp"

namespace pm {

// Numeric policy: exact mode runs on arbitrary-precision rationals
// end-to-end; float mode is Monte-Carlo with a recorded tolerance.
enum class NumericMode { ExactRational, Float64 };

struct NumericPolicy {
    NumericMode mode = NumericMode::ExactRational;
    double tolerance = 0.0;  // float mode only
};

// The unit of every experiment: a graph (or an explicit feasibility family)
// plus an arrival structure and per-batch joint weight distributions.
struct Instance {
    Graph graph;                             // matching instances
    std::optional<FeasibilityFamily> family; // set for explicit-family instances
    BatchStructure arrival;
    std::vector<std::vector<int>> batches;   // derived partition, element indices
    std::vector<JointDistribution> dists;    // one joint per batch

    bool family_mode() const { return family.has_value(); }
    int num_elements() const { return family_mode() ? family->ground : graph.edge_count(); }
    int num_batches() const { return static_cast<int>(batches.size()); }
    int batch_of_element(int e) const;

    // Product of batch support sizes, saturating at 2^62.
    unsigned long long joint_support_size() const;

    // True when every batch joint factorizes into independent per-element
    // marginals; such instances can be re-ordered.
    bool has_independent_elements() const;
    std::vector<Marginal> element_marginals() const;

    void validate() const;
};

Instance make_instance(Graph graph, BatchStructure arrival, std::vector<JointDistribution> dists);
Instance make_family_instance(FeasibilityFamily family, BatchStructure arrival,
                              std::vector<JointDistribution> dists);

// Builds a graph instance from independent per-edge marginals under any
// arrival structure (batch joints are assembled as products).
Instance make_independent_instance(Graph graph, BatchStructure arrival,
                                   const std::vector<Marginal>& per_edge);

// Rebuilds the same independent-weights instance under a different arrival
// structure; throws if the instance has within-batch correlation.
Instance reorder_instance(const Instance& inst, BatchStructure new_arrival);

// JSON schema (rationals serialized as "p/q" strings):
//   { "vertices": n, "edges": [[u,v],...],
//     "arrival": {"kind":"vertex"|"edge"|"explicit", "order":[...]},
//     "batches": [ {"edges":[...], "support":[{"weights":[...], "prob":"p/q"}]} ] }
// Explicit-family instances replace "vertices"/"edges" with
//   "ground": m, "feasible": [[...],...]
// and use arrival kind "explicit".
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& json_text);

}  // namespace pm
