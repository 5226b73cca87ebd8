#include "riskrjt/oracle.hpp"

#include <cmath>

namespace riskrjt {

namespace {

double objective_of(const UtilityDistribution& dist, const Objective& o) {
    if (o.kind == Objective::Kind::Meu) return dist.expected();
    return cvar_of_distribution(dist, o.alpha).cvar;
}

}  // namespace

StrategyEvaluation evaluate_problem(const InfluenceDiagram& d, const Strategy& s, const Problem& problem,
                                    const Caps& caps) {
    check_feasible(d, s);
    const auto values = d.nodes_of(NodeKind::Value);
    const std::size_t nc = problem.constraints.size();
    std::vector<double> mass(nc, 0.0);
    std::vector<std::pair<double, double>> pairs;

    JointEnumerator(d, caps).run(s, [&](std::span<const int> states, double p) {
        double u = 0.0;
        for (NodeId v : values) u += d.utility(v)[states[v.index()]];
        pairs.emplace_back(u, p);
        for (std::size_t k = 0; k < nc; ++k) {
            const RiskSpec& spec = problem.constraints[k];
            bool hit = false;
            if (const auto* c = std::get_if<ChanceSpec>(&spec)) {
                hit = c->event.holds(states);
            } else if (const auto* l = std::get_if<LogicalSpec>(&spec)) {
                hit = l->forbidden.holds(states);
            } else if (const auto* b = std::get_if<BudgetSpec>(&spec)) {
                hit = b->exceeds(states);
            }
            if (hit) mass[k] += p;
        }
    });

    StrategyEvaluation out;
    out.distribution = UtilityDistribution::from_pairs(std::move(pairs));
    out.objective = objective_of(out.distribution, problem.objective);
    out.constraint_values = mass;
    for (std::size_t k = 0; k < nc; ++k) {
        const RiskSpec& spec = problem.constraints[k];
        bool ok = true;
        if (const auto* c = std::get_if<ChanceSpec>(&spec)) {
            ok = c->bound == Bound::AtMost ? mass[k] <= c->p + kFeasibilityTolerance
                                           : mass[k] >= c->p - kFeasibilityTolerance;
        } else if (const auto* cv = std::get_if<CvarBoundSpec>(&spec)) {
            const double value = cvar_of_distribution(out.distribution, cv->alpha).cvar;
            out.constraint_values[k] = value;
            ok = cv->alpha * value >= cv->alpha * cv->threshold - kFeasibilityTolerance;
        } else {
            ok = mass[k] <= kFeasibilityTolerance;
        }
        out.feasible = out.feasible && ok;
    }
    return out;
}

OracleResult oracle_optimize(const InfluenceDiagram& d, const Problem& problem,
                             const OracleOptions& options) {
    const StrategySpace space = enumerate_strategies(d, options.caps);
    const auto scores = sweep(
        space.size(), options.policy,
        [&]() -> ScoreFn {
            return [&, scratch = Strategy{}](std::uint64_t i) mutable {
                space.at_into(i, scratch);
                const auto eval = evaluate_problem(d, scratch, problem, options.caps);
                return eval.feasible ? eval.objective : std::nan("");
            };
        },
        options.threads);

    OracleResult result;
    result.evaluated = space.size();
    const Best best = select_best(scores);
    if (best.index) {
        result.feasible = true;
        result.best = space.at(*best.index);
        result.objective = best.value;
        result.argmax = best.ties;
    }
    if (options.keep_log) {
        result.log.reserve(scores.size());
        for (const Strategy& s : space) {
            const auto eval = evaluate_problem(d, s, problem, options.caps);
            result.log.push_back({s, eval.objective, eval.feasible});
        }
    }
    return result;
}

}  // namespace riskrjt
