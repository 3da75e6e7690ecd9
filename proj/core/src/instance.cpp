#include "prophetmatch/instance.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace pm {

int Instance::batch_of_element(int e) const {
    for (int t = 0; t < num_batches(); ++t)
        for (int x : batches[t])
            if (x == e) return t;
    throw std::domain_error("element not in any batch");
}

unsigned long long Instance::joint_support_size() const {
    unsigned long long total = 1;
    const unsigned long long cap = 1ull << 62;
    for (const auto& d : dists) {
        total *= static_cast<unsigned long long>(d.atoms.size());
        if (total > cap) return cap;
    }
    return total;
}

bool Instance::has_independent_elements() const {
    for (int t = 0; t < num_batches(); ++t) {
        if (batches[t].size() <= 1) continue;
        // A joint over k elements factorizes iff it equals the product of its
        // own marginals.
        std::vector<Marginal> margs;
        const int k = static_cast<int>(batches[t].size());
        for (int j = 0; j < k; ++j) {
            std::map<Rat, Rat> mass;
            for (const Atom& a : dists[t].atoms) mass[a.weights[j]] += a.prob;
            Marginal m;
            for (auto& [w, p] : mass) m.support.push_back({w, p});
            margs.push_back(std::move(m));
        }
        JointDistribution prod = product_joint(margs);
        std::map<std::vector<Rat>, Rat> lhs, rhs;
        for (const Atom& a : dists[t].atoms) lhs[a.weights] += a.prob;
        for (const Atom& a : prod.atoms) rhs[a.weights] += a.prob;
        // Drop zero-probability product combinations.
        for (auto it = rhs.begin(); it != rhs.end();)
            it = (it->second == 0) ? rhs.erase(it) : std::next(it);
        if (lhs != rhs) return false;
    }
    return true;
}

std::vector<Marginal> Instance::element_marginals() const {
    std::vector<Marginal> out(num_elements());
    for (int t = 0; t < num_batches(); ++t)
        for (std::size_t j = 0; j < batches[t].size(); ++j) {
            std::map<Rat, Rat> mass;
            for (const Atom& a : dists[t].atoms) mass[a.weights[j]] += a.prob;
            Marginal m;
            for (auto& [w, p] : mass) m.support.push_back({w, p});
            out[batches[t][j]] = std::move(m);
        }
    return out;
}

void Instance::validate() const {
    if (family_mode()) {
        family->validate();
        if (arrival.kind == ArrivalKind::VertexArrival)
            throw std::domain_error("vertex arrival requires a graph instance");
    } else {
        graph.validate();
    }
    if (dists.size() != batches.size())
        throw std::domain_error("batch count does not match distribution count");
    std::vector<bool> seen(num_elements(), false);
    for (int t = 0; t < num_batches(); ++t) {
        dists[t].validate();
        if (dists[t].arity() != static_cast<int>(batches[t].size()))
            throw std::domain_error("distribution arity does not match batch size");
        for (int e : batches[t]) {
            if (e < 0 || e >= num_elements() || seen[e])
                throw std::domain_error("batches are not a partition of the element set");
            seen[e] = true;
        }
    }
    for (bool s : seen)
        if (!s) throw std::domain_error("batches do not cover the element set");
    // Batches must match the arrival structure.
    auto derived = family_mode() ? batches_of_ground(arrival, num_elements())
                                 : batches_of(arrival, graph);
    if (derived.size() != batches.size())
        throw std::domain_error("batch list inconsistent with arrival structure");
    for (std::size_t t = 0; t < derived.size(); ++t) {
        auto a = derived[t];
        auto b = batches[t];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw std::domain_error("batch list inconsistent with arrival structure");
    }
}

Instance make_instance(Graph graph, BatchStructure arrival, std::vector<JointDistribution> dists) {
    Instance inst;
    inst.graph = std::move(graph);
    inst.arrival = std::move(arrival);
    inst.batches = batches_of(inst.arrival, inst.graph);
    inst.dists = std::move(dists);
    for (auto& d : inst.dists) d.canonicalize();
    inst.validate();
    return inst;
}

Instance make_family_instance(FeasibilityFamily family, BatchStructure arrival,
                              std::vector<JointDistribution> dists) {
    Instance inst;
    inst.family = std::move(family);
    inst.arrival = std::move(arrival);
    inst.batches = batches_of_ground(inst.arrival, inst.family->ground);
    inst.dists = std::move(dists);
    for (auto& d : inst.dists) d.canonicalize();
    inst.validate();
    return inst;
}

Instance make_independent_instance(Graph graph, BatchStructure arrival,
                                   const std::vector<Marginal>& per_edge) {
    if (static_cast<int>(per_edge.size()) != graph.edge_count())
        throw std::domain_error("one marginal per edge required");
    auto batches = batches_of(arrival, graph);
    std::vector<JointDistribution> dists;
    dists.reserve(batches.size());
    for (const auto& b : batches) {
        std::vector<Marginal> margs;
        for (int e : b) margs.push_back(per_edge[e]);
        dists.push_back(product_joint(margs));
    }
    return make_instance(std::move(graph), std::move(arrival), std::move(dists));
}

Instance reorder_instance(const Instance& inst, BatchStructure new_arrival) {
    if (inst.family_mode()) throw std::domain_error("reorder supports graph instances only");
    if (!inst.has_independent_elements())
        throw std::domain_error("cannot reorder an instance with within-batch correlation");
    return make_independent_instance(inst.graph, std::move(new_arrival),
                                     inst.element_marginals());
}

namespace {

using nlohmann::json;

json arrival_to_json(const BatchStructure& s) {
    json j;
    switch (s.kind) {
        case ArrivalKind::VertexArrival: j["kind"] = "vertex"; j["order"] = s.order; break;
        case ArrivalKind::EdgeArrival: j["kind"] = "edge"; j["order"] = s.order; break;
        case ArrivalKind::Explicit: j["kind"] = "explicit"; break;
    }
    return j;
}

BatchStructure arrival_from_json(const json& j, const json& batches_json) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "vertex") return vertex_arrival(j.at("order").get<std::vector<int>>());
    if (kind == "edge") return edge_arrival(j.at("order").get<std::vector<int>>());
    if (kind == "explicit") {
        std::vector<std::vector<int>> batches;
        for (const auto& b : batches_json) batches.push_back(b.at("edges").get<std::vector<int>>());
        return explicit_batches(std::move(batches));
    }
    throw std::domain_error("unknown arrival kind: " + kind);
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
    json j;
    if (inst.family_mode()) {
        j["ground"] = inst.family->ground;
        json fs = json::array();
        for (ElemMask m : inst.family->sets) {
            json set = json::array();
            for (uint32_t x = m; x; x &= x - 1) set.push_back(lowest_bit(x));
            fs.push_back(set);
        }
        j["feasible"] = fs;
    } else {
        j["vertices"] = inst.graph.vertex_count;
        json edges = json::array();
        for (const Edge& e : inst.graph.edges) edges.push_back({e.u, e.v});
        j["edges"] = edges;
    }
    j["arrival"] = arrival_to_json(inst.arrival);
    json batches = json::array();
    for (int t = 0; t < inst.num_batches(); ++t) {
        json b;
        b["edges"] = inst.batches[t];
        json support = json::array();
        for (const Atom& a : inst.dists[t].atoms) {
            json atom;
            json ws = json::array();
            for (const Rat& w : a.weights) ws.push_back(rat_str(w));
            atom["weights"] = ws;
            atom["prob"] = rat_str(a.prob);
            support.push_back(atom);
        }
        b["support"] = support;
        batches.push_back(b);
    }
    j["batches"] = batches;
    return j.dump(2);
}

Instance instance_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    const json& batches_json = j.at("batches");
    std::vector<JointDistribution> dists;
    for (const auto& b : batches_json) {
        // Atom weight columns follow the stored "edges" list; reorder them to
        // the canonical (sorted) within-batch order used everywhere else.
        auto stored_edges = b.at("edges").get<std::vector<int>>();
        auto sorted_edges = stored_edges;
        std::sort(sorted_edges.begin(), sorted_edges.end());
        std::vector<int> col(stored_edges.size());
        for (std::size_t i = 0; i < sorted_edges.size(); ++i) {
            auto it = std::find(stored_edges.begin(), stored_edges.end(), sorted_edges[i]);
            col[i] = static_cast<int>(it - stored_edges.begin());
        }
        JointDistribution d;
        for (const auto& atom : b.at("support")) {
            std::vector<Rat> raw;
            for (const auto& w : atom.at("weights")) raw.push_back(rat_parse(w.get<std::string>()));
            if (raw.size() != stored_edges.size())
                throw std::domain_error("atom arity does not match batch edge list");
            Atom a;
            a.weights.resize(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) a.weights[i] = raw[col[i]];
            a.prob = rat_parse(atom.at("prob").get<std::string>());
            d.atoms.push_back(std::move(a));
        }
        dists.push_back(std::move(d));
    }
    BatchStructure arrival = arrival_from_json(j.at("arrival"), batches_json);

    Instance inst;
    if (j.contains("ground")) {
        std::vector<std::vector<int>> sets;
        for (const auto& s : j.at("feasible")) sets.push_back(s.get<std::vector<int>>());
        inst = make_family_instance(make_family(j.at("ground").get<int>(), sets),
                                    std::move(arrival), std::move(dists));
    } else {
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        inst = make_instance(make_graph(j.at("vertices").get<int>(), edges), std::move(arrival),
                             std::move(dists));
    }
    const json& stored = j.at("batches");
    for (int t = 0; t < inst.num_batches(); ++t) {
        auto a = stored[t].at("edges").get<std::vector<int>>();
        std::sort(a.begin(), a.end());
        if (a != inst.batches[t]) throw std::domain_error("stored batches disagree with arrival structure");
    }
    return inst;
}

}  // namespace pm
