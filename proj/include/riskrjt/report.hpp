#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/inference.hpp"
#include "riskrjt/mip_model.hpp"
#include "riskrjt/strategy.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace riskrjt {

struct RunReport {
    std::string instance;
    std::string objective;
    std::string backend;
    std::string status;
    double objective_value = 0.0;
    nlohmann::ordered_json strategy = nlohmann::ordered_json::object();
    double expected_utility = 0.0;
    double min_utility = 0.0;
    double max_utility = 0.0;
    std::size_t atoms = 0;
    std::optional<ModelStats> stats;
    double wall_seconds = 0.0;
    /// |objective - oracle evaluation of the same strategy|, when checked.
    std::optional<double> recheck_gap;
    /// Interpretation notes (e.g. random-instance recipe).
    std::vector<std::string> notes;

    void set_distribution(const UtilityDistribution& dist);
    void set_strategy(const InfluenceDiagram& d, const Strategy& s);
};

nlohmann::ordered_json to_json(const ModelStats& s);
nlohmann::ordered_json to_json(const RunReport& r);

/// One fixed-width line per report for terminal output.
std::string table_row(const RunReport& r);
std::string table_header();

}  // namespace riskrjt
