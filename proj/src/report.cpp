#include "riskrjt/report.hpp"

#include "riskrjt/diagram_io.hpp"

#include <cstdio>

namespace riskrjt {

void RunReport::set_distribution(const UtilityDistribution& dist) {
    expected_utility = dist.expected();
    atoms = dist.size();
    if (dist.size() > 0) {
        min_utility = dist.atoms().front().utility;
        max_utility = dist.atoms().back().utility;
    }
}

void RunReport::set_strategy(const InfluenceDiagram& d, const Strategy& s) { strategy = strategy_to_json(d, s); }

nlohmann::ordered_json to_json(const ModelStats& s) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::object();
    for (const auto& [family, count] : s.rows_by_family) rows[family] = count;
    return {{"variables", s.variables}, {"continuous", s.continuous}, {"binary", s.binary},
            {"free", s.free},           {"constraints", s.constraints}, {"nonzeros", s.nonzeros},
            {"rows_by_family", rows}};
}

nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json j{{"instance", r.instance},
                             {"objective", r.objective},
                             {"backend", r.backend},
                             {"status", r.status},
                             {"value", r.objective_value},
                             {"strategy", r.strategy},
                             {"distribution",
                              {{"expected", r.expected_utility},
                               {"min", r.min_utility},
                               {"max", r.max_utility},
                               {"atoms", r.atoms}}},
                             {"wall_seconds", r.wall_seconds}};
    if (r.stats) j["model"] = to_json(*r.stats);
    if (r.recheck_gap) j["recheck_gap"] = *r.recheck_gap;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

std::string table_header() {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s %-10s %-10s %-10s %16s %12s", "instance", "objective", "backend",
                  "status", "value", "seconds");
    return buf;
}

std::string table_row(const RunReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s %-10s %-10s %-10s %16.9g %12.4f", r.instance.c_str(), r.objective.c_str(),
                  r.backend.c_str(), r.status.c_str(), r.objective_value, r.wall_seconds);
    return buf;
}

}  // namespace riskrjt
