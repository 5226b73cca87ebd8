#include "riskrjt/risk.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace riskrjt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

double parse_number(std::string_view s, std::string_view what) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error("malformed " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

std::pair<std::string_view, std::optional<NodeId>> split_cluster(const InfluenceDiagram& d,
                                                                  std::string_view text) {
    const auto at = text.rfind('@');
    if (at == std::string_view::npos) return {trim(text), std::nullopt};
    return {trim(text.substr(0, at)), d.id(trim(text.substr(at + 1)))};
}

}  // namespace

std::vector<NodeId> Predicate::scope() const {
    std::vector<NodeId> out;
    for (const auto& clause : clauses) {
        for (const auto& lit : clause) {
            if (std::find(out.begin(), out.end(), lit.node) == out.end()) out.push_back(lit.node);
        }
    }
    return out;
}

bool Predicate::holds(std::span<const int> states) const {
    for (const auto& clause : clauses) {
        bool all = true;
        for (const auto& lit : clause) {
            if (states[lit.node.index()] != lit.state) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

std::vector<NodeId> BudgetSpec::scope() const {
    std::vector<NodeId> out;
    for (const auto& [node, c] : costs) out.push_back(node);
    return out;
}

double BudgetSpec::cost(std::span<const int> states) const {
    double total = 0.0;
    for (const auto& [node, c] : costs) total += c[states[node.index()]];
    return total;
}

Objective Objective::cvar(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
    return {Kind::Cvar, alpha};
}

Predicate parse_predicate(const InfluenceDiagram& d, std::string_view text) {
    Predicate p;
    if (trim(text).empty()) throw Error("empty predicate");
    for (auto clause_text : split(text, '|')) {
        std::vector<Literal> clause;
        for (auto lit_text : split(clause_text, '&')) {
            const auto eq = lit_text.find('=');
            if (eq == std::string_view::npos) {
                throw Error("predicate literal '" + std::string(lit_text) + "' is not node=state");
            }
            const NodeId node = d.id(trim(lit_text.substr(0, eq)));
            clause.push_back({node, d.state_index(node, trim(lit_text.substr(eq + 1)))});
        }
        p.clauses.push_back(std::move(clause));
    }
    return p;
}

std::string to_string(const InfluenceDiagram& d, const Predicate& p) {
    std::string out;
    for (std::size_t c = 0; c < p.clauses.size(); ++c) {
        if (c > 0) out += '|';
        for (std::size_t k = 0; k < p.clauses[c].size(); ++k) {
            const auto& lit = p.clauses[c][k];
            if (k > 0) out += '&';
            out += d.name(lit.node) + "=" + d.node(lit.node).states[lit.state];
        }
    }
    return out;
}

ChanceSpec parse_chance(const InfluenceDiagram& d, std::string_view text) {
    auto [body, cluster] = split_cluster(d, text);
    if (body.size() < 3 || body.substr(0, 2) != "P(") {
        throw Error("chance spec '" + std::string(text) + "' must look like P(<event>)<=p");
    }
    const auto close = body.rfind(')');
    if (close == std::string_view::npos) throw Error("chance spec '" + std::string(text) + "' lacks ')'");
    ChanceSpec spec;
    spec.event = parse_predicate(d, body.substr(2, close - 2));
    auto rest = trim(body.substr(close + 1));
    if (rest.starts_with("<=")) {
        spec.bound = Bound::AtMost;
    } else if (rest.starts_with(">=")) {
        spec.bound = Bound::AtLeast;
    } else {
        throw Error("chance spec '" + std::string(text) + "' needs <= or >=");
    }
    spec.p = parse_number(rest.substr(2), "probability");
    if (spec.p < 0.0 || spec.p > 1.0) throw Error("chance bound must lie in [0, 1]");
    spec.cluster = cluster;
    return spec;
}

LogicalSpec parse_logical(const InfluenceDiagram& d, std::string_view text) {
    auto [body, cluster] = split_cluster(d, text);
    return {parse_predicate(d, body), cluster};
}

BudgetSpec parse_budget(const InfluenceDiagram& d, const nlohmann::json& j) {
    BudgetSpec spec;
    try {
        for (const auto& [name, table] : j.at("costs").items()) {
            const NodeId node = d.id(name);
            std::vector<double> costs(d.state_count(node), 0.0);
            for (const auto& [label, c] : table.items()) {
                costs[d.state_index(node, label)] = c.get<double>();
            }
            spec.costs.emplace_back(node, std::move(costs));
        }
        spec.limit = j.at("limit").get<double>();
        if (j.contains("cluster")) spec.cluster = d.id(j.at("cluster").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed budget spec: ") + e.what());
    }
    if (spec.costs.empty()) throw Error("budget spec lists no costs");
    return spec;
}

Objective parse_objective(std::string_view text) {
    text = trim(text);
    if (text == "meu") return Objective::meu();
    if (text.starts_with("cvar:")) return Objective::cvar(parse_number(text.substr(5), "alpha"));
    throw Error("unknown objective '" + std::string(text) + "' (expected meu or cvar:<alpha>)");
}

CvarBoundSpec parse_cvar_bound(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw Error("CVaR bound '" + std::string(text) + "' must look like <alpha>:<threshold>");
    }
    CvarBoundSpec spec{parse_number(text.substr(0, colon), "alpha"),
                       parse_number(text.substr(colon + 1), "threshold")};
    if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
    return spec;
}

std::string describe(const InfluenceDiagram& d, const RiskSpec& spec) {
    std::ostringstream out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ChanceSpec>) {
                out << "P(" << to_string(d, s.event) << ")" << (s.bound == Bound::AtMost ? "<=" : ">=")
                    << s.p;
            } else if constexpr (std::is_same_v<T, LogicalSpec>) {
                out << "forbid " << to_string(d, s.forbidden);
            } else if constexpr (std::is_same_v<T, BudgetSpec>) {
                out << "budget";
                for (const auto& [node, c] : s.costs) out << ' ' << d.name(node);
                out << " <= " << s.limit;
            } else {
                out << "CVaR_" << s.alpha << " >= " << s.threshold;
            }
            if constexpr (!std::is_same_v<T, CvarBoundSpec>) {
                if (s.cluster) out << " @" << d.name(*s.cluster);
            }
        },
        spec);
    return out.str();
}

std::string describe(const Objective& o) {
    if (o.kind == Objective::Kind::Meu) return "meu";
    std::ostringstream out;
    out << "cvar:" << o.alpha;
    return out.str();
}

}  // namespace riskrjt
