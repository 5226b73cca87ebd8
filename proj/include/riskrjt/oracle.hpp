#pragma once

#include "riskrjt/inference.hpp"
#include "riskrjt/risk.hpp"
#include "riskrjt/strategy.hpp"
#include "riskrjt/sweep.hpp"

#include <vector>

namespace riskrjt {

/// Objective and constraint values of one strategy, computed from a single
/// pass over the joint distribution.
struct StrategyEvaluation {
    UtilityDistribution distribution;
    double objective = 0.0;
    bool feasible = true;
    /// One entry per constraint: event probability for chance/logical/budget
    /// specs, CVaR for CVaR bounds.
    std::vector<double> constraint_values;
};

StrategyEvaluation evaluate_problem(const InfluenceDiagram& d, const Strategy& s, const Problem& problem,
                                    const Caps& caps = {});

struct OracleLogEntry {
    Strategy strategy;
    double objective = 0.0;
    bool feasible = false;
};

struct OracleResult {
    bool feasible = false;
    Strategy best;
    double objective = 0.0;
    /// Strategy indices (lexicographic enumeration order) tied with the best.
    std::vector<std::uint64_t> argmax;
    std::uint64_t evaluated = 0;
    std::vector<OracleLogEntry> log;
};

struct OracleOptions {
    Caps caps;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
    int threads = 0;
    bool keep_log = false;
};

/// Exhaustive optimization over all deterministic strategies. Ties go to the
/// lexicographically smallest strategy.
OracleResult oracle_optimize(const InfluenceDiagram& d, const Problem& problem,
                             const OracleOptions& options = {});

}  // namespace riskrjt
