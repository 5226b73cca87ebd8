#include "riskrjt/inference.hpp"

#include "riskrjt/lp_format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace riskrjt {

double round_significant(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

UtilityDistribution UtilityDistribution::from_pairs(std::vector<std::pair<double, double>> pairs) {
    for (auto& [u, p] : pairs) u = round_significant(u);
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    UtilityDistribution out;
    for (const auto& [u, p] : pairs) {
        if (!out.atoms_.empty() && out.atoms_.back().utility == u) {
            out.atoms_.back().probability += p;
        } else {
            out.atoms_.push_back({u, p});
        }
    }
    std::erase_if(out.atoms_, [](const UtilityAtom& a) { return a.probability < kAtomDropThreshold; });
    return out;
}

double UtilityDistribution::total_probability() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.probability;
    return s;
}

double UtilityDistribution::expected() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.probability * a.utility;
    return s;
}

double UtilityDistribution::mass_below(double u) const {
    double s = 0.0;
    for (const auto& a : atoms_) {
        if (a.utility < u) s += a.probability;
    }
    return s;
}

std::string distribution_to_text(const UtilityDistribution& dist) {
    std::string out;
    for (const auto& a : dist.atoms()) out += format_number(a.utility) + ' ' + format_number(a.probability) + '\n';
    return out;
}

JointEnumerator::JointEnumerator(const InfluenceDiagram& d, const Caps& caps) : d_(&d) {
    std::uint64_t joint = 1;
    for (NodeId id : d.ids()) joint = saturating_mul(joint, d.state_count(id));
    if (joint > caps.joint_states) throw CapExceeded("joint state space", joint, caps.joint_states);

    for (NodeId id : topological_order(d)) {
        Step step;
        step.node = id;
        step.states = d.state_count(id);
        step.decision = d.kind(id) == NodeKind::Decision;
        const ConfigIndexer ix = d.parent_indexer(id);
        for (std::size_t k = 0; k < ix.size(); ++k) {
            step.parent_nodes.push_back(d.parents(id)[k].index());
            step.parent_strides.push_back(ix.strides()[k]);
        }
        steps_.push_back(std::move(step));
    }
}

double total_utility(const InfluenceDiagram& d, std::span<const int> states) {
    double u = 0.0;
    for (NodeId id : d.ids()) {
        if (d.kind(id) == NodeKind::Value) u += d.utility(id)[states[id.index()]];
    }
    return u;
}

UtilityDistribution evaluate_strategy(const InfluenceDiagram& d, const Strategy& s, const Caps& caps) {
    check_feasible(d, s);
    const auto values = d.nodes_of(NodeKind::Value);
    std::vector<std::pair<double, double>> pairs;
    JointEnumerator(d, caps).run(s, [&](std::span<const int> states, double p) {
        double u = 0.0;
        for (NodeId v : values) u += d.utility(v)[states[v.index()]];
        pairs.emplace_back(u, p);
    });
    return UtilityDistribution::from_pairs(std::move(pairs));
}

double expected_utility(const InfluenceDiagram& d, const Strategy& s, const Caps& caps) {
    return evaluate_strategy(d, s, caps).expected();
}

std::vector<double> joint_marginal(const InfluenceDiagram& d, const Strategy& s,
                                   std::span<const NodeId> scope, const Caps& caps) {
    check_feasible(d, s);
    const ConfigIndexer ix = d.indexer(scope);
    std::vector<double> table(ix.total(), 0.0);
    JointEnumerator(d, caps).run(s, [&](std::span<const int> states, double p) {
        std::uint64_t cfg = 0;
        for (std::size_t k = 0; k < scope.size(); ++k) {
            cfg += static_cast<std::uint64_t>(states[scope[k].index()]) * ix.strides()[k];
        }
        table[cfg] += p;
    });
    return table;
}

TailWeights tail_weights(std::span<const double> utilities, std::span<const double> probabilities,
                         double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
    TailWeights out;
    out.weights.assign(utilities.size(), 0.0);
    if (utilities.empty()) return out;
    double cumulative = 0.0;
    std::size_t k = 0;
    for (; k < utilities.size(); ++k) {
        if (cumulative + probabilities[k] >= alpha - 1e-12) break;
        cumulative += probabilities[k];
        out.weights[k] = probabilities[k];
    }
    // Rounding can leave the total just short of alpha; the last atom is the VaR.
    if (k == utilities.size()) k = utilities.size() - 1;
    out.var_atom = k;
    cumulative -= out.weights[k];
    out.weights[k] = std::clamp(alpha - cumulative, 0.0, probabilities[k]);
    return out;
}

CvarValue cvar_of_distribution(const UtilityDistribution& dist, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
    if (dist.size() == 0) throw Error("CVaR of an empty distribution");
    std::vector<double> u, p;
    for (const auto& a : dist.atoms()) {
        u.push_back(a.utility);
        p.push_back(a.probability);
    }
    const TailWeights tw = tail_weights(u, p, alpha);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) acc += tw.weights[k] * u[k];
    return {u[tw.var_atom], acc / alpha};
}

}  // namespace riskrjt
