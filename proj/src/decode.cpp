#include "riskrjt/decode.hpp"

#include "riskrjt/mip_builder.hpp"

#include <algorithm>
#include <cmath>

namespace riskrjt {

Decoded decode(const Solution& sol, const MipModel& model, const RootedJunctionTree& t,
               const InfluenceDiagram& d) {
    if (sol.status != SolveStatus::Optimal) {
        throw Error("cannot decode a solution with status " + std::string(to_string(sol.status)));
    }
    if (sol.values.size() != model.variables().size()) throw Error("solution does not match the model");
    const Catalog& cat = model.catalog();
    const auto& x = sol.values;
    Decoded out;

    for (const DecisionBlock& b : cat.decisions) {
        DecisionRule rule{NodeId{b.decision}, std::vector<int>(b.info.total(), -1)};
        for (std::uint64_t i = 0; i < b.info.total(); ++i) {
            for (std::size_t s = 0; s < b.states; ++s) {
                const VarId v = b.delta(i, static_cast<int>(s));
                const double val = x[v.index];
                if (std::min(std::abs(val), std::abs(val - 1.0)) > kIntegralityTolerance) {
                    throw Error("fractional decision variable " + model.variable(v).name + " = " +
                                std::to_string(val));
                }
                if (val > 0.5) {
                    if (rule.choice[i] >= 0) {
                        throw Error("two states chosen for " + d.name(rule.decision) + " at information " +
                                    std::to_string(i));
                    }
                    rule.choice[i] = static_cast<int>(s);
                }
            }
            if (rule.choice[i] < 0) {
                throw Error("no state chosen for " + d.name(rule.decision) + " at information " +
                            std::to_string(i));
            }
        }
        out.strategy.rules.push_back(std::move(rule));
    }
    // Strategy rules follow declaration order.
    std::sort(out.strategy.rules.begin(), out.strategy.rules.end(),
              [](const DecisionRule& a, const DecisionRule& b) { return a.decision < b.decision; });
    check_feasible(d, out.strategy);

    for (const ClusterBlock& b : cat.clusters) {
        std::vector<double> table(b.configs.total());
        for (std::uint64_t c = 0; c < b.configs.total(); ++c) table[c] = x[b.mu(c).index];
        out.mu.push_back(std::move(table));
    }

    const auto values = d.nodes_of(NodeKind::Value);
    if (values.size() == 1) {
        const NodeId v = values.front();
        const ClusterBlock& b = cat.cluster(v.value);
        std::vector<std::pair<double, double>> pairs;
        std::vector<int> states;
        for (std::uint64_t c = 0; c < b.configs.total(); ++c) {
            cluster_states(d, t, v, c, states);
            pairs.emplace_back(d.utility(v)[states[v.index()]], x[b.mu(c).index]);
        }
        out.distribution = UtilityDistribution::from_pairs(std::move(pairs));
        out.distribution_from_mu = true;
    } else {
        out.distribution = evaluate_strategy(d, out.strategy);
    }

    if (const auto& cv = cat.cvar) {
        DecodedCvar dc;
        const ClusterBlock& vb = cat.cluster(cv->value_node);
        dc.eta = x[cv->eta.index];
        dc.utilities = cv->utilities;
        const std::size_t n = cv->utilities.size();
        dc.probabilities.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::uint64_t c : cv->configs[k]) dc.probabilities[k] += x[vb.mu(c).index];
            dc.rho_bar.push_back(x[cv->at(cv->rho_bar, k).index]);
            dc.value += dc.rho_bar.back() * cv->utilities[k];
        }
        dc.value /= cv->alpha;
        dc.expected_rho_bar = tail_weights(dc.utilities, dc.probabilities, cv->alpha).weights;
        for (std::size_t k = 0; k < n; ++k) {
            dc.max_deviation = std::max(dc.max_deviation, std::abs(dc.rho_bar[k] - dc.expected_rho_bar[k]));
        }
        out.cvar = std::move(dc);
    }
    return out;
}

}  // namespace riskrjt
