#include "prophetmatch/distribution.hpp"

#include <algorithm>
#include <stdexcept>

namespace pm {

void JointDistribution::canonicalize() {
    for (Atom& a : atoms) {
        a.prob.canonicalize();
        for (Rat& w : a.weights) w.canonicalize();
    }
}

void JointDistribution::validate() const {
    if (atoms.empty()) throw std::domain_error("empty distribution support");
    const std::size_t k = atoms[0].weights.size();
    Rat total = 0;
    for (const Atom& a : atoms) {
        if (a.weights.size() != k) throw std::domain_error("ragged atom weight vector");
        if (a.prob <= 0 || a.prob > 1) throw std::domain_error("atom probability outside (0,1]");
        for (const Rat& w : a.weights)
            if (w < 0) throw std::domain_error("negative weight");
        total += a.prob;
    }
    if (total != 1) throw std::domain_error("atom probabilities do not sum to 1");
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            if (atoms[i].weights == atoms[j].weights)
                throw std::domain_error("duplicate atom weight vector");
}

int JointDistribution::sample(RngStream& rng) const {
    std::vector<Rat> probs;
    probs.reserve(atoms.size());
    for (const Atom& a : atoms) probs.push_back(a.prob);
    CategoricalSampler sampler(probs);
    std::size_t i = sampler.draw(rng);
    if (i >= atoms.size()) i = atoms.size() - 1;  // residual mass is rounding only
    return static_cast<int>(i);
}

JointDistribution point_mass(std::vector<Rat> weights) {
    JointDistribution d;
    d.atoms.push_back({std::move(weights), Rat(1)});
    return d;
}

JointDistribution two_point(const Rat& value, const Rat& prob_value, const Rat& other) {
    JointDistribution d;
    if (prob_value <= 0 || prob_value > 1) throw std::domain_error("probability outside (0,1]");
    if (prob_value == 1) return point_mass({value});
    d.atoms.push_back({{value}, prob_value});
    d.atoms.push_back({{other}, Rat(1) - prob_value});
    return d;
}

JointDistribution product_joint(const std::vector<Marginal>& marginals) {
    JointDistribution d;
    d.atoms.push_back({{}, Rat(1)});
    for (const Marginal& m : marginals) {
        std::vector<Atom> next;
        for (const Atom& a : d.atoms)
            for (const auto& [w, p] : m.support) {
                Atom n = a;
                n.weights.push_back(w);
                n.prob *= p;
                next.push_back(std::move(n));
            }
        d.atoms = std::move(next);
    }
    return d;
}

}  // namespace pm
