#pragma once

#include "riskrjt/diagram.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riskrjt {

/// Directed tree with one cluster per diagram node. Clusters are addressed by
/// their root node; members are kept sorted by position in the build order.
class RootedJunctionTree {
public:
    RootedJunctionTree() = default;
    /// `members` and `parent` are indexed by root node id. Members are sorted
    /// and deduplicated; the root itself is not inserted implicitly.
    RootedJunctionTree(std::vector<NodeId> order, std::vector<std::vector<NodeId>> members,
                       std::vector<std::optional<NodeId>> parent);

    std::size_t size() const noexcept { return members_.size(); }
    std::span<const NodeId> order() const noexcept { return order_; }
    std::size_t rank(NodeId n) const { return rank_.at(n.index()); }

    const std::vector<NodeId>& cluster(NodeId root) const { return members_.at(root.index()); }
    bool contains(NodeId root, NodeId node) const;
    std::optional<NodeId> parent(NodeId root) const { return parent_.at(root.index()); }
    /// Children of a cluster, sorted by rank of their roots.
    std::vector<NodeId> children(NodeId root) const;
    /// Roots of clusters without a parent, sorted by rank.
    std::vector<NodeId> tree_roots() const;
    /// Depth-first preorder from the unique tree root; children in rank order.
    /// Throws Error if the parent links do not form a single rooted tree.
    std::vector<NodeId> preorder() const;
    /// Arcs (parent root, child root) sorted by rank of the child.
    std::vector<std::pair<NodeId, NodeId>> arcs() const;
    /// Size of the largest cluster minus one.
    std::size_t width() const;

    void add_member(NodeId root, NodeId node);
    void set_parent(NodeId root, std::optional<NodeId> parent);

    friend bool operator==(const RootedJunctionTree&, const RootedJunctionTree&) = default;

private:
    std::vector<NodeId> order_;
    std::vector<std::size_t> rank_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<std::optional<NodeId>> parent_;
};

/// Gradual RJT from a topological order, processing nodes from last to first:
///   C_j = {j} ∪ I(j) ∪ ⋃ { C_w \ {w} : C_w is a child of C_j }
/// where the parent of C_w is the root cluster of the latest-ordered member of
/// C_w \ {w}. A cluster with C_j = {j} hangs below the cluster of j's
/// predecessor in the order (or is the tree root when j comes first).
/// Throws Error when `order` is not a topological order of `d`.
RootedJunctionTree build_rjt(const InfluenceDiagram& d, std::span<const NodeId> order);
RootedJunctionTree build_rjt(const InfluenceDiagram& d);

/// Checks the tree shape and the junction tree rules: (a) running
/// intersection, (b) one root cluster per node that is the top of the
/// clusters containing it, (c) I(j) ⊆ C_j. Checking (a) as "every non-root
/// member is also in the parent" makes the gradual property follow from
/// (a) and (b).
std::vector<Violation> validate_rjt(const RootedJunctionTree& t, const InfluenceDiagram& d);

/// Roots whose cluster is reachable from C_j along directed arcs (including j),
/// sorted by rank.
std::vector<NodeId> reachable_roots(const RootedJunctionTree& t, NodeId j);

/// Cluster roots on the directed path C_from -> ... -> C_to (inclusive), or
/// empty when no directed path exists.
std::vector<NodeId> directed_path_clusters(const RootedJunctionTree& t, NodeId from, NodeId to);

struct ModifyStep {
    std::string label;
    RootedJunctionTree tree;
};

/// Grows clusters so that all of `targets` end up in the root cluster of the
/// latest-ordered target m. For every other target n (ascending order) not yet
/// in C_m: when C_m is not below C_n, the clusters on the path from the
/// lowest common ancestor C_e to C_n receive C_e ∩ C_g (C_g being the child
/// of C_e towards C_m) and C_g is re-hung below C_n; then n is added to every
/// cluster on the path C_n -> C_m. Clusters and memberships are never removed.
///
/// Snapshots after each modifying step are appended to `trace` when given.
/// Throws Error on an empty target set or when no common ancestor exists.
RootedJunctionTree modify_rjt(const RootedJunctionTree& t, std::span<const NodeId> targets,
                              std::vector<ModifyStep>* trace = nullptr);

/// Graphviz rendering; each cluster is labelled with its root and members.
std::string to_dot(const RootedJunctionTree& t, const InfluenceDiagram& d);
/// One line per cluster: "C_<root>: <members> <- <parent>".
std::string describe(const RootedJunctionTree& t, const InfluenceDiagram& d);

}  // namespace riskrjt
