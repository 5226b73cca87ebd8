#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/junction_tree.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using namespace riskrjt;

/// Six-node diagram A..F with the example tree used for the modify walkthrough.
inline InfluenceDiagram walkthrough_diagram() {
    const std::vector<std::string> s{"0", "1"};
    return DiagramBuilder()
        .chance("A", s, {}, {0.5, 0.5})
        .chance("B", s, {"A"}, {0.6, 0.4, 0.3, 0.7})
        .chance("C", s, {"A", "B"}, {0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6})
        .chance("D", s, {"B"}, {0.5, 0.5, 0.9, 0.1})
        .chance("E", s, {"B", "C"}, {0.1, 0.9, 0.5, 0.5, 0.7, 0.3, 0.2, 0.8})
        .chance("F", s, {"B"}, {0.4, 0.6, 0.8, 0.2})
        .build();
}

using ClusterMap = std::map<std::string, std::set<std::string>>;
using ArcSet = std::set<std::pair<std::string, std::string>>;

inline RootedJunctionTree tree_from(const InfluenceDiagram& d, const ClusterMap& clusters, const ArcSet& arcs) {
    std::vector<std::vector<NodeId>> members(d.size());
    std::vector<std::optional<NodeId>> parent(d.size());
    for (const auto& [root, names] : clusters) {
        for (const auto& n : names) members[d.id(root).index()].push_back(d.id(n));
    }
    for (const auto& [p, c] : arcs) parent[d.id(c).index()] = d.id(p);
    return RootedJunctionTree(topological_order(d), members, parent);
}

inline ClusterMap clusters_of(const RootedJunctionTree& t, const InfluenceDiagram& d) {
    ClusterMap out;
    for (NodeId j : t.order()) {
        auto& set = out[d.name(j)];
        for (NodeId m : t.cluster(j)) set.insert(d.name(m));
    }
    return out;
}

inline ArcSet arcs_of(const RootedJunctionTree& t, const InfluenceDiagram& d) {
    ArcSet out;
    for (auto [p, c] : t.arcs()) out.emplace(d.name(p), d.name(c));
    return out;
}

/// Cluster sets written as in a figure: "C_B: AB" with single-letter or
/// multi-character names separated by spaces.
inline std::set<std::string> members(std::initializer_list<const char*> names) {
    return {names.begin(), names.end()};
}

}  // namespace fixtures
