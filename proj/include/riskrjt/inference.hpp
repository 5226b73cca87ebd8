#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/strategy.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace riskrjt {

/// Rounds to `digits` significant decimal digits. Used as the equality key
/// for utility values.
double round_significant(double x, int digits = 12);

struct UtilityAtom {
    double utility = 0.0;
    double probability = 0.0;

    friend bool operator==(const UtilityAtom&, const UtilityAtom&) = default;
};

inline constexpr double kAtomDropThreshold = 1e-15;

/// Discrete distribution of total utility; atoms sorted by strictly
/// increasing utility.
class UtilityDistribution {
public:
    UtilityDistribution() = default;

    /// Aggregates raw (utility, probability) pairs: utilities are rounded to
    /// 12 significant digits, equal keys are summed, atoms below 1e-15 are
    /// dropped.
    static UtilityDistribution from_pairs(std::vector<std::pair<double, double>> pairs);

    std::span<const UtilityAtom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double total_probability() const;
    double expected() const;
    /// Probability mass strictly below `u`.
    double mass_below(double u) const;

    friend bool operator==(const UtilityDistribution&, const UtilityDistribution&) = default;

private:
    std::vector<UtilityAtom> atoms_;
};

/// Two columns "utility probability", ascending, one atom per line.
std::string distribution_to_text(const UtilityDistribution& dist);

/// Depth-first walk over every joint configuration with positive
/// probability under a fixed strategy. Nodes are visited in topological
/// order; decisions follow the strategy, chance and value nodes branch over
/// states with nonzero probability.
class JointEnumerator {
public:
    /// Throws CapExceeded when the joint state space exceeds `caps.joint_states`.
    explicit JointEnumerator(const InfluenceDiagram& d, const Caps& caps = {});

    const InfluenceDiagram& diagram() const noexcept { return *d_; }

    /// Calls `visit(states, probability)` for each configuration; `states` is
    /// indexed by node id.
    template <class Visit>
    void run(const Strategy& s, Visit&& visit) const {
        std::vector<int> states(d_->size(), 0);
        std::vector<const DecisionRule*> rules(d_->size(), nullptr);
        for (const auto& r : s.rules) rules[r.decision.index()] = &r;
        descend(0, 1.0, states, rules, visit);
    }

private:
    struct Step {
        NodeId node;
        std::vector<std::size_t> parent_nodes;
        std::vector<std::uint64_t> parent_strides;
        std::size_t states = 0;
        bool decision = false;
    };

    std::uint64_t parent_config(const Step& step, const std::vector<int>& states) const {
        std::uint64_t cfg = 0;
        for (std::size_t k = 0; k < step.parent_nodes.size(); ++k) {
            cfg += static_cast<std::uint64_t>(states[step.parent_nodes[k]]) * step.parent_strides[k];
        }
        return cfg;
    }

    template <class Visit>
    void descend(std::size_t depth, double prob, std::vector<int>& states,
                 const std::vector<const DecisionRule*>& rules, Visit& visit) const {
        if (depth == steps_.size()) {
            visit(std::span<const int>(states), prob);
            return;
        }
        const Step& step = steps_[depth];
        const std::uint64_t cfg = parent_config(step, states);
        if (step.decision) {
            const DecisionRule* rule = rules[step.node.index()];
            if (!rule) throw Error("strategy has no rule for decision " + d_->name(step.node));
            states[step.node.index()] = rule->choice[cfg];
            descend(depth + 1, prob, states, rules, visit);
            return;
        }
        for (std::size_t s = 0; s < step.states; ++s) {
            const double p = d_->probability(step.node, cfg, static_cast<int>(s));
            if (p == 0.0) continue;
            states[step.node.index()] = static_cast<int>(s);
            descend(depth + 1, prob * p, states, rules, visit);
        }
    }

    const InfluenceDiagram* d_ = nullptr;
    std::vector<Step> steps_;
};

/// Total utility of a full configuration, summed over value nodes in
/// declaration order.
double total_utility(const InfluenceDiagram& d, std::span<const int> states);

UtilityDistribution evaluate_strategy(const InfluenceDiagram& d, const Strategy& s,
                                      const Caps& caps = {});
double expected_utility(const InfluenceDiagram& d, const Strategy& s, const Caps& caps = {});

/// Marginal over `scope` (ConfigIndexer order of `scope`). An empty scope
/// gives the single entry 1.
std::vector<double> joint_marginal(const InfluenceDiagram& d, const Strategy& s,
                                   std::span<const NodeId> scope, const Caps& caps = {});

struct CvarValue {
    double var = 0.0;
    double cvar = 0.0;
};

/// Lower-tail value-at-risk and CVaR at level alpha in (0, 1]. The VaR is
/// the smallest utility whose cumulative probability reaches alpha.
CvarValue cvar_of_distribution(const UtilityDistribution& dist, double alpha);

/// Index of the VaR atom and the tail weight of each atom: full mass below
/// the VaR, the remainder alpha - mass_below at the VaR, zero above.
struct TailWeights {
    std::size_t var_atom = 0;
    std::vector<double> weights;
};
TailWeights tail_weights(std::span<const double> utilities, std::span<const double> probabilities,
                         double alpha);

}  // namespace riskrjt
