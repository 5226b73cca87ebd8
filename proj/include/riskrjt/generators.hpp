#pragma once

#include "riskrjt/diagram.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace riskrjt {

/// Pig breeding over `periods` treatment decisions. Nodes are declared
/// H1, T1, D1, V1, ..., H_N, T_N, D_N, V_N, H_{N+1}, V_{N+1}.
struct PigFarmSpec {
    int periods = 3;
    double price_healthy = 1000.0;
    double price_ill = 300.0;
    double injection_cost = 100.0;
    double sensitivity = 0.9;
    double specificity = 0.8;
    double prior_ill = 0.1;
    double ill_treated_recovers = 0.5;
    double ill_untreated_recovers = 0.1;
    double healthy_treated_falls_ill = 0.1;
    double healthy_untreated_falls_ill = 0.2;
    /// With a seed, every chance CPT entry gets U[0, noise] added and its
    /// row is renormalized. Utilities are never perturbed.
    std::optional<std::uint64_t> seed;
    double noise = 0.3;
};

InfluenceDiagram gen_pigfarm(const PigFarmSpec& spec);

/// Load L, reports R_i | L, fortification decisions A_i | R_i, failure
/// F | L, A_1..A_N and one value node T | A_1..A_N, F whose states are the
/// joint (A, F) outcomes. Declared L, R1, A1, ..., R_N, A_N, F, T.
///
/// The tables are random but monotone: reports are most likely at the level
/// matching the load, failure probability rises with load and falls with
/// each fortification level. Utility = -Σ_i cost_i * level(A_i) + reward if
/// F is intact.
struct NMonitoringSpec {
    int monitors = 2;
    int load_states = 2;
    int report_states = 2;
    int action_states = 2;
    std::uint64_t seed = 1;
    double reward = 1000.0;
    double cost_low = 50.0;
    double cost_high = 150.0;
    /// Extra weight on the report matching the load.
    double report_accuracy = 2.0;
};

InfluenceDiagram gen_nmonitoring(const NMonitoringSpec& spec);

/// Uniform doubles in [0, 1) built from the top 53 bits of std::mt19937_64,
/// whose output sequence is fixed by the standard (unlike the std
/// distributions).
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

/// Resolves "pigfarm:N[:seed]" and "nmonitoring:N[:seed]"; anything else is
/// read as a diagram file.
InfluenceDiagram load_instance(const std::string& ref);

}  // namespace riskrjt
