#include "riskrjt/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace riskrjt {

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Chance: return "chance";
        case NodeKind::Decision: return "decision";
        case NodeKind::Value: return "value";
    }
    return "unknown";
}

NodeKind parse_node_kind(std::string_view text) {
    if (text == "chance") return NodeKind::Chance;
    if (text == "decision") return NodeKind::Decision;
    if (text == "value") return NodeKind::Value;
    throw Error("unknown node kind '" + std::string(text) + "'");
}

InfluenceDiagram::InfluenceDiagram(std::vector<Node> nodes, std::vector<std::vector<double>> cpts,
                                   std::vector<std::vector<double>> utilities)
    : nodes_(std::move(nodes)), cpts_(std::move(cpts)), utilities_(std::move(utilities)) {
    cpts_.resize(nodes_.size());
    utilities_.resize(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        auto [it, inserted] = by_name_.emplace(nodes_[k].name, NodeId{k});
        if (!inserted) throw Error("duplicate node name '" + nodes_[k].name + "'");
        for (NodeId p : nodes_[k].parents) {
            if (p.index() >= nodes_.size()) {
                throw Error("node '" + nodes_[k].name + "' has a parent id out of range");
            }
        }
    }
}

std::optional<NodeId> InfluenceDiagram::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

NodeId InfluenceDiagram::id(std::string_view name) const {
    if (auto found = find(name)) return *found;
    throw Error("no node named '" + std::string(name) + "'");
}

int InfluenceDiagram::state_index(NodeId id, std::string_view label) const {
    const auto& states = node(id).states;
    auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end()) {
        throw Error("node '" + name(id) + "' has no state '" + std::string(label) + "'");
    }
    return static_cast<int>(it - states.begin());
}

std::vector<NodeId> InfluenceDiagram::ids() const {
    std::vector<NodeId> out;
    out.reserve(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) out.emplace_back(k);
    return out;
}

std::vector<NodeId> InfluenceDiagram::nodes_of(NodeKind kind) const {
    std::vector<NodeId> out;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        if (nodes_[k].kind == kind) out.emplace_back(k);
    }
    return out;
}

ConfigIndexer InfluenceDiagram::parent_indexer(NodeId id) const {
    return indexer(node(id).parents);
}

ConfigIndexer InfluenceDiagram::indexer(std::span<const NodeId> scope) const {
    std::vector<std::size_t> radices;
    radices.reserve(scope.size());
    for (NodeId n : scope) radices.push_back(state_count(n));
    return ConfigIndexer(std::vector<NodeId>(scope.begin(), scope.end()), std::move(radices));
}

bool operator==(const InfluenceDiagram& a, const InfluenceDiagram& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t k = 0; k < a.nodes_.size(); ++k) {
        const Node& x = a.nodes_[k];
        const Node& y = b.nodes_[k];
        if (x.name != y.name || x.kind != y.kind || x.states != y.states || x.parents != y.parents) {
            return false;
        }
    }
    return a.cpts_ == b.cpts_ && a.utilities_ == b.utilities_;
}

DiagramBuilder& DiagramBuilder::chance(std::string name, std::vector<std::string> states,
                                       std::vector<std::string> parents, std::vector<double> cpt) {
    pending_.push_back({std::move(name), NodeKind::Chance, std::move(states), std::move(parents),
                        std::move(cpt), {}});
    return *this;
}

DiagramBuilder& DiagramBuilder::decision(std::string name, std::vector<std::string> states,
                                         std::vector<std::string> parents) {
    pending_.push_back(
        {std::move(name), NodeKind::Decision, std::move(states), std::move(parents), {}, {}});
    return *this;
}

DiagramBuilder& DiagramBuilder::value(std::string name, std::vector<std::string> states,
                                      std::vector<std::string> parents, std::vector<double> cpt,
                                      std::vector<double> utilities) {
    pending_.push_back({std::move(name), NodeKind::Value, std::move(states), std::move(parents),
                        std::move(cpt), std::move(utilities)});
    return *this;
}

InfluenceDiagram DiagramBuilder::build() const {
    std::unordered_map<std::string, NodeId> ids;
    for (std::size_t k = 0; k < pending_.size(); ++k) {
        if (!ids.emplace(pending_[k].name, NodeId{k}).second) {
            throw Error("duplicate node name '" + pending_[k].name + "'");
        }
    }
    std::vector<Node> nodes;
    std::vector<std::vector<double>> cpts;
    std::vector<std::vector<double>> utilities;
    for (const auto& p : pending_) {
        Node n{p.name, p.kind, p.states, {}};
        for (const auto& parent : p.parents) {
            auto it = ids.find(parent);
            if (it == ids.end()) {
                throw Error("node '" + p.name + "' names unknown parent '" + parent + "'");
            }
            n.parents.push_back(it->second);
        }
        nodes.push_back(std::move(n));
        cpts.push_back(p.cpt);
        utilities.push_back(p.utilities);
    }
    return InfluenceDiagram(std::move(nodes), std::move(cpts), std::move(utilities));
}

namespace {

std::uint64_t row_count(const InfluenceDiagram& d, NodeId id) {
    std::uint64_t rows = 1;
    for (NodeId p : d.parents(id)) rows = saturating_mul(rows, d.state_count(p));
    return rows;
}

/// Nodes left over by Kahn's algorithm contain at least one cycle; walk parent
/// links inside that set until a node repeats.
std::vector<NodeId> find_cycle(const InfluenceDiagram& d, const std::vector<bool>& remaining) {
    std::size_t start = 0;
    while (!remaining[start]) ++start;
    std::vector<int> seen_at(d.size(), -1);
    std::vector<NodeId> walk;
    NodeId cur{start};
    while (seen_at[cur.index()] < 0) {
        seen_at[cur.index()] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (NodeId p : d.parents(cur)) {
            if (remaining[p.index()]) {
                cur = p;
                break;
            }
        }
    }
    std::vector<NodeId> cycle(walk.begin() + seen_at[cur.index()], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
}

std::string cycle_text(const InfluenceDiagram& d, const std::vector<NodeId>& cycle) {
    std::string out;
    for (NodeId n : cycle) out += d.name(n) + " -> ";
    out += d.name(cycle.front());
    return out;
}

struct KahnResult {
    std::vector<NodeId> order;
    std::vector<bool> remaining;
};

KahnResult kahn(const InfluenceDiagram& d) {
    const std::size_t n = d.size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<NodeId>> children(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (NodeId p : d.parents(NodeId{k})) {
            ++indegree[k];
            children[p.index()].emplace_back(k);
        }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t k = 0; k < n; ++k) {
        if (indegree[k] == 0) ready.push(k);
    }
    KahnResult result;
    result.remaining.assign(n, true);
    while (!ready.empty()) {
        std::size_t k = ready.top();
        ready.pop();
        result.order.emplace_back(k);
        result.remaining[k] = false;
        for (NodeId c : children[k]) {
            if (--indegree[c.index()] == 0) ready.push(c.index());
        }
    }
    return result;
}

}  // namespace

std::vector<Violation> validate_diagram(const InfluenceDiagram& d) {
    std::vector<Violation> out;
    auto add = [&](std::string rule, std::string message) {
        out.push_back({std::move(rule), std::move(message)});
    };

    for (NodeId id : d.ids()) {
        const Node& node = d.node(id);
        const std::string& name = node.name;

        if (node.states.empty()) {
            add("empty-states", "node '" + name + "' has no states");
            continue;
        }
        {
            auto states = node.states;
            std::sort(states.begin(), states.end());
            if (std::adjacent_find(states.begin(), states.end()) != states.end()) {
                add("duplicate-state", "node '" + name + "' repeats a state label");
            }
        }
        {
            auto parents = node.parents;
            std::sort(parents.begin(), parents.end());
            if (std::adjacent_find(parents.begin(), parents.end()) != parents.end()) {
                add("duplicate-parent", "node '" + name + "' lists a parent twice");
            }
        }
        for (NodeId p : node.parents) {
            if (d.kind(p) == NodeKind::Value) {
                add("value-parent", "arc " + d.name(p) + " -> " + name + " leaves value node '" +
                                        d.name(p) + "'");
            }
        }

        const auto& cpt = d.cpt(id);
        if (node.kind == NodeKind::Decision) {
            if (!cpt.empty()) add("decision-cpt", "decision node '" + name + "' carries a CPT");
        } else {
            bool parents_ok = std::all_of(node.parents.begin(), node.parents.end(),
                                          [&](NodeId p) { return !d.node(p).states.empty(); });
            if (parents_ok) {
                const std::uint64_t rows = row_count(d, id);
                const std::uint64_t expected = saturating_mul(rows, node.states.size());
                if (cpt.size() != expected) {
                    add("cpt-size", "node '" + name + "' CPT has " + std::to_string(cpt.size()) +
                                        " entries, expected " + std::to_string(expected));
                } else {
                    const std::size_t width = node.states.size();
                    for (std::uint64_t r = 0; r < rows; ++r) {
                        double sum = 0.0;
                        bool range_ok = true;
                        for (std::size_t s = 0; s < width; ++s) {
                            double p = cpt[r * width + s];
                            if (!std::isfinite(p) || p < 0.0 || p > 1.0) range_ok = false;
                            sum += p;
                        }
                        if (!range_ok) {
                            add("cpt-range", "node '" + name + "' CPT row " + std::to_string(r) +
                                                 " has an entry outside [0,1]");
                        } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
                            std::ostringstream msg;
                            msg.precision(17);
                            msg << "node '" << name << "' CPT row " << r << " sums to " << sum;
                            add("cpt-row-sum", msg.str());
                        }
                    }
                }
            }
        }

        const auto& util = d.utility(id);
        if (node.kind == NodeKind::Value) {
            if (util.size() != node.states.size()) {
                add("utility-size", "value node '" + name + "' has " + std::to_string(util.size()) +
                                        " utilities for " + std::to_string(node.states.size()) +
                                        " states");
            }
            for (double u : util) {
                if (!std::isfinite(u)) {
                    add("utility-finite", "value node '" + name + "' has a non-finite utility");
                    break;
                }
            }
        } else if (!util.empty()) {
            add("utility-owner", "non-value node '" + name + "' carries utilities");
        }
    }

    KahnResult k = kahn(d);
    if (k.order.size() != d.size()) {
        add("cycle", "arcs contain the cycle " + cycle_text(d, find_cycle(d, k.remaining)));
    }
    return out;
}

std::vector<NodeId> topological_order(const InfluenceDiagram& d) {
    KahnResult k = kahn(d);
    if (k.order.size() != d.size()) {
        throw Error("diagram is cyclic: " + cycle_text(d, find_cycle(d, k.remaining)));
    }
    return std::move(k.order);
}

bool is_topological_order(const InfluenceDiagram& d, std::span<const NodeId> order) {
    if (order.size() != d.size()) return false;
    std::vector<int> position(d.size(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k].index() >= d.size() || position[order[k].index()] >= 0) return false;
        position[order[k].index()] = static_cast<int>(k);
    }
    for (NodeId id : d.ids()) {
        for (NodeId p : d.parents(id)) {
            if (position[p.index()] >= position[id.index()]) return false;
        }
    }
    return true;
}

std::vector<NodeId> parse_node_list(const InfluenceDiagram& d, std::string_view csv) {
    std::vector<NodeId> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string_view::npos) comma = csv.size();
        std::string_view token = csv.substr(pos, comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty()) out.push_back(d.id(token));
        pos = comma + 1;
    }
    return out;
}

InfluenceDiagram renormalized(const InfluenceDiagram& d) {
    std::vector<Node> nodes(d.nodes().begin(), d.nodes().end());
    std::vector<std::vector<double>> cpts;
    std::vector<std::vector<double>> utilities;
    for (NodeId id : d.ids()) {
        std::vector<double> cpt = d.cpt(id);
        const std::size_t width = d.state_count(id);
        if (width > 0 && !cpt.empty() && cpt.size() % width == 0) {
            for (std::size_t r = 0; r < cpt.size() / width; ++r) {
                double sum = 0.0;
                for (std::size_t s = 0; s < width; ++s) sum += cpt[r * width + s];
                if (sum > 0.0) {
                    for (std::size_t s = 0; s < width; ++s) cpt[r * width + s] /= sum;
                }
            }
        }
        cpts.push_back(std::move(cpt));
        utilities.push_back(d.utility(id));
    }
    return InfluenceDiagram(std::move(nodes), std::move(cpts), std::move(utilities));
}

}  // namespace riskrjt
