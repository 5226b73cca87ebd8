#include "riskrjt/transform.hpp"

#include <algorithm>

namespace riskrjt {

MergeResult merge_value_nodes(const InfluenceDiagram& d, const MergeOptions& options) {
    if (auto violations = validate_diagram(d); !violations.empty()) {
        throw Error("cannot merge value nodes of an invalid diagram: " + violations.front().message);
    }
    const auto values = d.nodes_of(NodeKind::Value);
    if (values.empty()) throw Error("diagram has no value node to merge");

    std::vector<std::size_t> radices;
    std::uint64_t merged_states = 1;
    for (NodeId v : values) {
        radices.push_back(d.state_count(v));
        merged_states = saturating_mul(merged_states, d.state_count(v));
    }
    if (merged_states > options.state_cap) {
        throw CapExceeded("merged value node state space", merged_states, options.state_cap);
    }

    if (values.size() == 1) {
        MergedValueMap map{d.name(values.front()), {d.name(values.front())},
                           ConfigIndexer(values, radices)};
        return {d, std::move(map)};
    }
    if (d.find(options.merged_name)) {
        throw Error("merged node name '" + options.merged_name + "' is already taken");
    }

    MergedValueMap map;
    map.merged = options.merged_name;
    for (NodeId v : values) map.components.push_back(d.name(v));
    map.tuples = ConfigIndexer(values, radices);

    std::vector<Node> nodes;
    std::vector<std::vector<double>> cpts;
    std::vector<std::vector<double>> utilities;
    std::vector<NodeId> remap(d.size());
    for (NodeId id : d.ids()) {
        if (d.kind(id) == NodeKind::Value) continue;
        remap[id.index()] = NodeId{nodes.size()};
        nodes.push_back(d.node(id));
        cpts.push_back(d.cpt(id));
        utilities.push_back({});
    }
    for (auto& n : nodes) {
        for (auto& p : n.parents) p = remap[p.index()];
    }

    // Parents of the merged node in topological order of the input diagram.
    std::vector<bool> is_parent(d.size(), false);
    for (NodeId v : values) {
        for (NodeId p : d.parents(v)) is_parent[p.index()] = true;
    }
    std::vector<NodeId> parents;
    for (NodeId id : topological_order(d)) {
        if (is_parent[id.index()]) parents.push_back(id);
    }
    const ConfigIndexer parent_ix = d.indexer(parents);

    // Each component's parent configuration as a function of the merged one.
    std::vector<std::vector<std::size_t>> component_parent_pos(values.size());
    for (std::size_t c = 0; c < values.size(); ++c) {
        for (NodeId p : d.parents(values[c])) {
            auto it = std::find(parents.begin(), parents.end(), p);
            component_parent_pos[c].push_back(static_cast<std::size_t>(it - parents.begin()));
        }
    }

    const std::size_t width = static_cast<std::size_t>(merged_states);
    std::vector<double> cpt(static_cast<std::size_t>(parent_ix.total()) * width);
    std::vector<int> parent_states(parents.size());
    std::vector<int> tuple(values.size());
    std::vector<std::uint64_t> component_row(values.size());
    for (std::uint64_t row = 0; row < parent_ix.total(); ++row) {
        parent_ix.decode_into(row, parent_states);
        for (std::size_t c = 0; c < values.size(); ++c) {
            std::vector<int> sub;
            for (std::size_t pos : component_parent_pos[c]) sub.push_back(parent_states[pos]);
            component_row[c] = d.parent_indexer(values[c]).index(sub);
        }
        for (std::size_t s = 0; s < width; ++s) {
            map.tuples.decode_into(s, tuple);
            double p = 1.0;
            for (std::size_t c = 0; c < values.size(); ++c) {
                p *= d.probability(values[c], component_row[c], tuple[c]);
            }
            cpt[row * width + s] = p;
        }
    }

    std::vector<double> utility(width);
    std::vector<std::string> labels(width);
    for (std::size_t s = 0; s < width; ++s) {
        map.tuples.decode_into(s, tuple);
        double u = 0.0;
        std::string label;
        for (std::size_t c = 0; c < values.size(); ++c) {
            u += d.utility(values[c])[tuple[c]];
            if (c > 0) label += '|';
            label += d.node(values[c]).states[tuple[c]];
        }
        utility[s] = u;
        labels[s] = std::move(label);
    }

    Node merged{options.merged_name, NodeKind::Value, std::move(labels), {}};
    for (NodeId p : parents) merged.parents.push_back(remap[p.index()]);
    nodes.push_back(std::move(merged));
    cpts.push_back(std::move(cpt));
    utilities.push_back(std::move(utility));
    return {InfluenceDiagram(std::move(nodes), std::move(cpts), std::move(utilities)),
            std::move(map)};
}

nlohmann::ordered_json merged_map_to_json(const MergedValueMap& map) {
    std::vector<std::size_t> radices(map.tuples.radices().begin(), map.tuples.radices().end());
    return {{"merged", map.merged}, {"components", map.components}, {"radices", radices}};
}

MergedValueMap merged_map_from_json(const nlohmann::json& j) {
    MergedValueMap map;
    map.merged = j.at("merged").get<std::string>();
    map.components = j.at("components").get<std::vector<std::string>>();
    map.tuples = ConfigIndexer(j.at("radices").get<std::vector<std::size_t>>());
    return map;
}

}  // namespace riskrjt
