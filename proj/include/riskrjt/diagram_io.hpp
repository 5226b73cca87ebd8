#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/strategy.hpp"

#include <filesystem>
#include <string>

#include <json.hpp>

namespace riskrjt {

// Diagram files:
//   {
//     "nodes": [{"name": "H1", "kind": "chance", "states": [...], "parents": [...]}, ...],
//     "cpts": {"H1": [p, ...], ...},        // parent config outer, own state inner
//     "utilities": {"V1": [u, ...], ...}
//   }
// Strategy files map each decision name to the chosen state labels, one per
// configuration of its information set.

nlohmann::ordered_json diagram_to_json(const InfluenceDiagram& d);
InfluenceDiagram diagram_from_json(const nlohmann::json& j);

std::string write_diagram(const InfluenceDiagram& d);
InfluenceDiagram read_diagram(const std::string& text);
InfluenceDiagram load_diagram(const std::filesystem::path& path);
void save_diagram(const InfluenceDiagram& d, const std::filesystem::path& path);

nlohmann::ordered_json strategy_to_json(const InfluenceDiagram& d, const Strategy& s);
Strategy strategy_from_json(const InfluenceDiagram& d, const nlohmann::json& j);

}  // namespace riskrjt
