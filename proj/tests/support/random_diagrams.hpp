#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/generators.hpp"
#include "riskrjt/strategy.hpp"

#include <cstdint>
#include <vector>

namespace riskrjt::testing {

struct RandomDiagramSpec {
    int min_nodes = 3;
    int max_nodes = 10;
    int max_states = 3;
    int max_parents = 3;
    int max_values = 3;
    /// Chance that a CPT entry is forced to zero before normalization.
    double zero_rate = 0.1;
};

/// Random DAG in declaration order: chance and decision nodes draw parents
/// from earlier non-value nodes, value nodes are sinks. At least one decision
/// and one value node.
InfluenceDiagram random_diagram(std::uint64_t seed, const RandomDiagramSpec& spec = {});

Strategy random_strategy(const InfluenceDiagram& d, UniformSource& rng);

/// Non-empty random subset of the nodes.
std::vector<NodeId> random_targets(const InfluenceDiagram& d, UniformSource& rng, std::size_t max_size = 4);

/// Random order that is topological for `d`.
std::vector<NodeId> random_topological_order(const InfluenceDiagram& d, UniformSource& rng);

}  // namespace riskrjt::testing
