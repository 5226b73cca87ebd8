#pragma once

#include "riskrjt/config_index.hpp"
#include "riskrjt/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace riskrjt {

enum class NodeKind { Chance, Decision, Value };

std::string_view to_string(NodeKind kind) noexcept;
/// Accepts "chance", "decision", "value" (case-sensitive).
NodeKind parse_node_kind(std::string_view text);

struct Node {
    std::string name;
    NodeKind kind = NodeKind::Chance;
    std::vector<std::string> states;
    std::vector<NodeId> parents;
};

/// A rule broken by a diagram or junction tree. Validators return these as
/// data instead of throwing.
struct Violation {
    std::string rule;
    std::string message;
};

/// Chance, decision and value nodes over finite state spaces, with one CPT
/// per chance/value node and one utility table per value node.
///
/// CPT layout: row-major with the parent configuration outer and the node's
/// own state inner; parent configurations follow ConfigIndexer over the
/// declared parent order. The object may hold invalid data (cycles, bad row
/// sums); validate_diagram() reports it.
class InfluenceDiagram {
public:
    InfluenceDiagram() = default;
    /// `cpts` and `utilities` are indexed by node; entries that do not apply
    /// to a node's kind are left empty. Throws Error on duplicate node names
    /// or parent ids outside the node range.
    InfluenceDiagram(std::vector<Node> nodes, std::vector<std::vector<double>> cpts,
                     std::vector<std::vector<double>> utilities);

    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const Node> nodes() const noexcept { return nodes_; }
    const Node& node(NodeId id) const { return nodes_.at(id.index()); }
    const std::string& name(NodeId id) const { return node(id).name; }
    NodeKind kind(NodeId id) const { return node(id).kind; }
    std::size_t state_count(NodeId id) const { return node(id).states.size(); }
    std::span<const NodeId> parents(NodeId id) const { return node(id).parents; }

    const std::vector<double>& cpt(NodeId id) const { return cpts_.at(id.index()); }
    const std::vector<double>& utility(NodeId id) const { return utilities_.at(id.index()); }

    /// P(state | parent configuration) for chance and value nodes.
    double probability(NodeId id, std::uint64_t parent_config, int state) const {
        return cpts_[id.index()][parent_config * nodes_[id.index()].states.size() +
                                 static_cast<std::size_t>(state)];
    }

    std::optional<NodeId> find(std::string_view name) const;
    /// Throws Error naming the missing node.
    NodeId id(std::string_view name) const;
    /// Throws Error when the label is not a state of the node.
    int state_index(NodeId id, std::string_view label) const;

    std::vector<NodeId> ids() const;
    std::vector<NodeId> nodes_of(NodeKind kind) const;
    ConfigIndexer parent_indexer(NodeId id) const;
    ConfigIndexer indexer(std::span<const NodeId> scope) const;

    friend bool operator==(const InfluenceDiagram& a, const InfluenceDiagram& b);

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<double>> cpts_;
    std::vector<std::vector<double>> utilities_;
    std::unordered_map<std::string, NodeId> by_name_;
};

/// Incremental construction by node name. Parents may name nodes declared
/// later, so cyclic inputs can be represented and then reported by the
/// validator.
class DiagramBuilder {
public:
    DiagramBuilder& chance(std::string name, std::vector<std::string> states,
                           std::vector<std::string> parents, std::vector<double> cpt);
    DiagramBuilder& decision(std::string name, std::vector<std::string> states,
                             std::vector<std::string> parents);
    DiagramBuilder& value(std::string name, std::vector<std::string> states,
                          std::vector<std::string> parents, std::vector<double> cpt,
                          std::vector<double> utilities);

    /// Throws Error on unknown parent names or duplicate node names.
    InfluenceDiagram build() const;

private:
    struct Pending {
        std::string name;
        NodeKind kind;
        std::vector<std::string> states;
        std::vector<std::string> parents;
        std::vector<double> cpt;
        std::vector<double> utilities;
    };
    std::vector<Pending> pending_;
};

inline constexpr double kRowSumTolerance = 1e-9;

std::vector<Violation> validate_diagram(const InfluenceDiagram& d);

/// Kahn's algorithm; among ready nodes the earliest-declared goes first, so a
/// diagram declared in topological order comes back unchanged.
/// Throws Error naming one cycle if the arcs are cyclic.
std::vector<NodeId> topological_order(const InfluenceDiagram& d);

bool is_topological_order(const InfluenceDiagram& d, std::span<const NodeId> order);

/// Resolves a comma-separated list of node names to ids.
std::vector<NodeId> parse_node_list(const InfluenceDiagram& d, std::string_view csv);

/// Copy of `d` with every CPT row rescaled to sum to one. Only applied on
/// explicit request; rows summing to zero are left untouched.
InfluenceDiagram renormalized(const InfluenceDiagram& d);

}  // namespace riskrjt
