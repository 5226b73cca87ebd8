#pragma once

#include "riskrjt/config_index.hpp"
#include "riskrjt/diagram.hpp"

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace riskrjt {

/// Bijection between the states of the merged value node and tuples of
/// component value-node states (first component most significant).
struct MergedValueMap {
    std::string merged;
    std::vector<std::string> components;
    ConfigIndexer tuples;

    std::vector<int> component_states(int merged_state) const {
        return tuples.decode(static_cast<std::uint64_t>(merged_state));
    }
    int merged_state(std::span<const int> component_states) const {
        return static_cast<int>(tuples.index(component_states));
    }
};

struct MergeOptions {
    std::string merged_name = "Vbar";
    std::uint64_t state_cap = std::uint64_t{1} << 24;
};

struct MergeResult {
    InfluenceDiagram diagram;
    MergedValueMap map;
};

/// Replaces all value nodes by one node whose states are the tuples of
/// component states. Chance and decision nodes keep their arcs and tables;
/// the new node is appended last with parents = union of the component
/// parents in topological order, CPT = product of the component CPTs and
/// utility = sum of the component utilities (summed in declaration order).
///
/// A diagram with a single value node is returned unchanged with an identity
/// map. Throws CapExceeded when the merged state space exceeds the cap, and
/// Error when the diagram has no value node or is invalid.
MergeResult merge_value_nodes(const InfluenceDiagram& d, const MergeOptions& options = {});

nlohmann::ordered_json merged_map_to_json(const MergedValueMap& map);
MergedValueMap merged_map_from_json(const nlohmann::json& j);

}  // namespace riskrjt
