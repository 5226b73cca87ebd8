#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/inference.hpp"
#include "riskrjt/junction_tree.hpp"
#include "riskrjt/mip_model.hpp"
#include "riskrjt/solution.hpp"
#include "riskrjt/strategy.hpp"

#include <optional>
#include <vector>

namespace riskrjt {

struct DecodedCvar {
    double eta = 0.0;
    std::vector<double> utilities;
    std::vector<double> probabilities;
    std::vector<double> rho_bar;
    /// ρ̄ implied by the tail semantics for the decoded probabilities.
    std::vector<double> expected_rho_bar;
    double max_deviation = 0.0;
    /// (1/alpha) Σ ρ̄ u from the solution.
    double value = 0.0;
};

struct Decoded {
    Strategy strategy;
    UtilityDistribution distribution;
    /// True when the distribution was read off the value cluster's μ (single
    /// value node); otherwise it comes from evaluating the strategy.
    bool distribution_from_mu = false;
    /// μ tables in catalog order, indexed by cluster configuration.
    std::vector<std::vector<double>> mu;
    std::optional<DecodedCvar> cvar;
};

inline constexpr double kIntegralityTolerance = 1e-6;

/// Throws Error unless the solution is optimal and every δ lies within 1e-6
/// of 0 or 1 with exactly one chosen state per information configuration.
Decoded decode(const Solution& sol, const MipModel& model, const RootedJunctionTree& t,
               const InfluenceDiagram& d);

}  // namespace riskrjt
