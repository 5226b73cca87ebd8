#include "riskrjt/junction_tree.hpp"

#include <algorithm>
#include <sstream>

namespace riskrjt {

RootedJunctionTree::RootedJunctionTree(std::vector<NodeId> order,
                                       std::vector<std::vector<NodeId>> members,
                                       std::vector<std::optional<NodeId>> parent)
    : order_(std::move(order)), members_(std::move(members)), parent_(std::move(parent)) {
    const std::size_t n = order_.size();
    if (members_.size() != n || parent_.size() != n) {
        throw Error("junction tree needs one cluster and one parent entry per node");
    }
    rank_.assign(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (order_[k].index() >= n || rank_[order_[k].index()] != n) {
            throw Error("junction tree order is not a permutation of the nodes");
        }
        rank_[order_[k].index()] = k;
    }
    for (auto& cluster : members_) {
        for (NodeId m : cluster) {
            if (m.index() >= n) throw Error("cluster member out of range");
        }
        std::sort(cluster.begin(), cluster.end(),
                  [&](NodeId a, NodeId b) { return rank_[a.index()] < rank_[b.index()]; });
        cluster.erase(std::unique(cluster.begin(), cluster.end()), cluster.end());
    }
    for (const auto& p : parent_) {
        if (p && p->index() >= n) throw Error("cluster parent out of range");
    }
}

bool RootedJunctionTree::contains(NodeId root, NodeId node) const {
    const auto& c = members_.at(root.index());
    return std::find(c.begin(), c.end(), node) != c.end();
}

std::vector<NodeId> RootedJunctionTree::children(NodeId root) const {
    std::vector<NodeId> out;
    for (NodeId n : order_) {
        if (parent_[n.index()] == root) out.push_back(n);
    }
    return out;
}

std::vector<NodeId> RootedJunctionTree::tree_roots() const {
    std::vector<NodeId> out;
    for (NodeId n : order_) {
        if (!parent_[n.index()]) out.push_back(n);
    }
    return out;
}

std::vector<NodeId> RootedJunctionTree::preorder() const {
    auto roots = tree_roots();
    if (roots.size() != 1) {
        throw Error("junction tree has " + std::to_string(roots.size()) + " root clusters");
    }
    std::vector<std::vector<NodeId>> kids(size());
    for (NodeId n : order_) {
        if (auto p = parent_[n.index()]) kids[p->index()].push_back(n);
    }
    std::vector<NodeId> out;
    std::vector<NodeId> stack{roots.front()};
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        out.push_back(cur);
        for (auto it = kids[cur.index()].rbegin(); it != kids[cur.index()].rend(); ++it) {
            stack.push_back(*it);
        }
    }
    if (out.size() != size()) throw Error("junction tree parent links contain a cycle");
    return out;
}

std::vector<std::pair<NodeId, NodeId>> RootedJunctionTree::arcs() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId n : order_) {
        if (auto p = parent_[n.index()]) out.emplace_back(*p, n);
    }
    return out;
}

std::size_t RootedJunctionTree::width() const {
    std::size_t w = 0;
    for (const auto& c : members_) w = std::max(w, c.size());
    return w == 0 ? 0 : w - 1;
}

void RootedJunctionTree::add_member(NodeId root, NodeId node) {
    auto& c = members_.at(root.index());
    auto pos = std::lower_bound(c.begin(), c.end(), node, [&](NodeId a, NodeId b) {
        return rank_[a.index()] < rank_[b.index()];
    });
    if (pos == c.end() || *pos != node) c.insert(pos, node);
}

void RootedJunctionTree::set_parent(NodeId root, std::optional<NodeId> parent) {
    parent_.at(root.index()) = parent;
}

RootedJunctionTree build_rjt(const InfluenceDiagram& d, std::span<const NodeId> order) {
    if (!is_topological_order(d, order)) {
        throw Error("node order is not a topological order of the diagram");
    }
    const std::size_t n = d.size();
    std::vector<std::size_t> rank(n);
    for (std::size_t k = 0; k < n; ++k) rank[order[k].index()] = k;

    std::vector<std::vector<bool>> in(n, std::vector<bool>(n, false));
    std::vector<std::optional<NodeId>> parent(n);

    for (std::size_t k = n; k-- > 0;) {
        const NodeId j = order[k];
        auto& mine = in[j.index()];
        mine[j.index()] = true;
        for (NodeId p : d.parents(j)) mine[p.index()] = true;
        // Children already attached to C_j pass their separators up.
        for (std::size_t w = k + 1; w < n; ++w) {
            const NodeId child = order[w];
            if (parent[child.index()] != j) continue;
            for (std::size_t m = 0; m < n; ++m) {
                if (in[child.index()][m] && m != child.index()) mine[m] = true;
            }
        }
        // Parent: cluster of the latest-ordered other member.
        std::optional<std::size_t> latest;
        for (std::size_t m = 0; m < n; ++m) {
            if (!mine[m] || m == j.index()) continue;
            if (!latest || rank[m] > rank[*latest]) latest = m;
        }
        if (latest) {
            parent[j.index()] = NodeId{*latest};
        } else if (k > 0) {
            parent[j.index()] = order[k - 1];
        }
    }

    std::vector<std::vector<NodeId>> members(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
            if (in[j][m]) members[j].emplace_back(m);
        }
    }
    return RootedJunctionTree(std::vector<NodeId>(order.begin(), order.end()), std::move(members),
                              std::move(parent));
}

RootedJunctionTree build_rjt(const InfluenceDiagram& d) {
    auto order = topological_order(d);
    return build_rjt(d, order);
}

std::vector<Violation> validate_rjt(const RootedJunctionTree& t, const InfluenceDiagram& d) {
    std::vector<Violation> out;
    auto add = [&](std::string rule, std::string message) {
        out.push_back({std::move(rule), std::move(message)});
    };
    if (t.size() != d.size()) {
        add("(b)", "tree has " + std::to_string(t.size()) + " clusters for " +
                       std::to_string(d.size()) + " nodes");
        return out;
    }
    try {
        (void)t.preorder();
    } catch (const Error& e) {
        add("tree", e.what());
        return out;
    }

    auto cname = [&](NodeId root) { return "C_" + d.name(root); };
    for (NodeId j : d.ids()) {
        const auto parent = t.parent(j);
        // (b) C_j holds j and is the topmost cluster containing j.
        if (!t.contains(j, j)) {
            add("(b)", cname(j) + " does not contain its root node " + d.name(j));
        } else if (parent && t.contains(*parent, j)) {
            add("(b)", cname(j) + " is not the root cluster of " + d.name(j) + ": parent " +
                           cname(*parent) + " also contains it");
        }
        // (c) information set inside the root cluster.
        for (NodeId p : d.parents(j)) {
            if (!t.contains(j, p)) {
                add("(c)", cname(j) + " lacks parent " + d.name(p) + " of " + d.name(j));
            }
        }
        // (a) every non-root occurrence of a node is also in the parent
        // cluster, so the clusters containing it form one connected subtree.
        for (NodeId m : t.cluster(j)) {
            if (m == j) continue;
            if (!parent || !t.contains(*parent, m)) {
                add("(a)", d.name(m) + " appears in " + cname(j) + " but not in its parent" +
                               (parent ? " " + cname(*parent) : std::string()));
            }
        }
    }
    return out;
}

std::vector<NodeId> reachable_roots(const RootedJunctionTree& t, NodeId j) {
    std::vector<NodeId> out;
    for (NodeId k : t.order()) {
        std::optional<NodeId> cur = k;
        std::size_t steps = 0;
        while (cur && steps++ <= t.size()) {
            if (*cur == j) {
                out.push_back(k);
                break;
            }
            cur = t.parent(*cur);
        }
    }
    return out;
}

std::vector<NodeId> directed_path_clusters(const RootedJunctionTree& t, NodeId from, NodeId to) {
    std::vector<NodeId> path;
    std::optional<NodeId> cur = to;
    while (cur) {
        path.push_back(*cur);
        if (*cur == from) {
            std::reverse(path.begin(), path.end());
            return path;
        }
        if (path.size() > t.size()) break;
        cur = t.parent(*cur);
    }
    return {};
}

namespace {

std::vector<NodeId> ancestors_inclusive(const RootedJunctionTree& t, NodeId j) {
    std::vector<NodeId> chain;
    std::optional<NodeId> cur = j;
    while (cur && chain.size() <= t.size()) {
        chain.push_back(*cur);
        cur = t.parent(*cur);
    }
    return chain;
}

}  // namespace

RootedJunctionTree modify_rjt(const RootedJunctionTree& t, std::span<const NodeId> targets,
                              std::vector<ModifyStep>* trace) {
    if (targets.empty()) throw Error("modify_rjt needs at least one target node");
    for (NodeId n : targets) {
        if (n.index() >= t.size()) throw Error("modify_rjt target out of range");
    }
    std::vector<NodeId> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end(), [&](NodeId a, NodeId b) { return t.rank(a) < t.rank(b); });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const NodeId m = sorted.back();

    RootedJunctionTree out = t;
    auto snapshot = [&](const std::string& label) {
        if (trace) trace->push_back({label, out});
    };

    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const NodeId n = sorted[k];
        if (out.contains(m, n)) continue;

        if (directed_path_clusters(out, n, m).empty()) {
            // Lowest common ancestor of C_n and C_m, and the child C_g of C_e
            // that leads to C_m.
            const auto up_n = ancestors_inclusive(out, n);
            const auto up_m = ancestors_inclusive(out, m);
            std::optional<NodeId> e;
            std::optional<NodeId> g;
            NodeId prev = m;
            for (NodeId a : up_m) {
                if (std::find(up_n.begin(), up_n.end(), a) != up_n.end()) {
                    e = a;
                    break;
                }
                prev = a;
            }
            if (!e) {
                throw Error("targets " + std::to_string(n.value) + " and " + std::to_string(m.value) +
                            " lie in disconnected trees");
            }
            if (*e == m) {
                throw Error("cluster of a target lies below the cluster of the last target; "
                            "the modification is undefined for this tree");
            }
            g = prev;

            std::vector<NodeId> shared;
            for (NodeId x : out.cluster(*e)) {
                if (out.contains(*g, x)) shared.push_back(x);
            }
            for (NodeId c : directed_path_clusters(out, *e, n)) {
                for (NodeId x : shared) out.add_member(c, x);
            }
            snapshot("fill, n = " + std::to_string(n.value));
            out.set_parent(*g, n);
            snapshot("rehang, n = " + std::to_string(n.value));
        }

        for (NodeId c : directed_path_clusters(out, n, m)) out.add_member(c, n);
        snapshot("extend, n = " + std::to_string(n.value));
    }
    return out;
}

std::string to_dot(const RootedJunctionTree& t, const InfluenceDiagram& d) {
    std::ostringstream out;
    out << "digraph rjt {\n  node [shape=box, style=rounded];\n";
    for (NodeId j : t.order()) {
        out << "  \"" << d.name(j) << "\" [label=\"C_" << d.name(j) << ": ";
        bool first = true;
        for (NodeId m : t.cluster(j)) {
            out << (first ? "" : " ") << d.name(m);
            first = false;
        }
        out << "\"];\n";
    }
    for (auto [p, c] : t.arcs()) {
        out << "  \"" << d.name(p) << "\" -> \"" << d.name(c) << "\";\n";
    }
    out << "}\n";
    return out.str();
}

std::string describe(const RootedJunctionTree& t, const InfluenceDiagram& d) {
    std::ostringstream out;
    for (NodeId j : t.order()) {
        out << "C_" << d.name(j) << ": {";
        bool first = true;
        for (NodeId m : t.cluster(j)) {
            out << (first ? "" : ",") << d.name(m);
            first = false;
        }
        out << "}";
        if (auto p = t.parent(j)) out << " <- C_" << d.name(*p);
        out << "\n";
    }
    return out.str();
}

}  // namespace riskrjt
