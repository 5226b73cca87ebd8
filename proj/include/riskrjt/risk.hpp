#pragma once

#include "riskrjt/diagram.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace riskrjt {

struct Literal {
    NodeId node;
    int state = 0;

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Disjunction of conjunctions of `node=state` literals.
/// Text form: `A=x&B=y|C=z` (`&` binds tighter than `|`).
struct Predicate {
    std::vector<std::vector<Literal>> clauses;

    /// Nodes mentioned, in first-appearance order without duplicates.
    std::vector<NodeId> scope() const;
    /// `states` is indexed by node id.
    bool holds(std::span<const int> states) const;

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class Bound { AtMost, AtLeast };

/// P(event) <= p or >= p, imposed on one cluster's marginal.
struct ChanceSpec {
    Predicate event;
    Bound bound = Bound::AtMost;
    double p = 0.0;
    std::optional<NodeId> cluster;
};

/// Configurations satisfying `forbidden` get zero probability.
struct LogicalSpec {
    Predicate forbidden;
    std::optional<NodeId> cluster;
};

/// Sum of per-state costs over the listed nodes must not exceed `limit` in
/// any configuration with positive probability.
struct BudgetSpec {
    std::vector<std::pair<NodeId, std::vector<double>>> costs;
    double limit = 0.0;
    std::optional<NodeId> cluster;

    std::vector<NodeId> scope() const;
    double cost(std::span<const int> states) const;
    /// Cost above the limit by more than 1e-9.
    bool exceeds(std::span<const int> states) const { return cost(states) > limit + 1e-9; }
};

/// CVaR of the single value node at level alpha, bounded below.
struct CvarBoundSpec {
    double alpha = 1.0;
    double threshold = 0.0;
};

using RiskSpec = std::variant<ChanceSpec, LogicalSpec, BudgetSpec, CvarBoundSpec>;

struct Objective {
    enum class Kind { Meu, Cvar };
    Kind kind = Kind::Meu;
    double alpha = 1.0;

    static Objective meu() { return {}; }
    static Objective cvar(double alpha);
};

struct Problem {
    Objective objective;
    std::vector<RiskSpec> constraints;
};

/// Feasibility tolerance shared by the oracle and the reference solver.
inline constexpr double kFeasibilityTolerance = 1e-9;

Predicate parse_predicate(const InfluenceDiagram& d, std::string_view text);
std::string to_string(const InfluenceDiagram& d, const Predicate& p);

/// `P(<predicate>)<=p` or `P(<predicate>)>=p`, optionally suffixed with
/// `@<node>` to pin the cluster.
ChanceSpec parse_chance(const InfluenceDiagram& d, std::string_view text);
/// `<predicate>` or `<predicate>@<node>`.
LogicalSpec parse_logical(const InfluenceDiagram& d, std::string_view text);
/// {"costs": {"D1": {"treat": 100}, ...}, "limit": 200, "cluster": "H4"}
BudgetSpec parse_budget(const InfluenceDiagram& d, const nlohmann::json& j);
/// `meu`, `cvar:<alpha>`.
Objective parse_objective(std::string_view text);
/// `<alpha>:<threshold>`.
CvarBoundSpec parse_cvar_bound(std::string_view text);

std::string describe(const InfluenceDiagram& d, const RiskSpec& spec);
std::string describe(const Objective& o);

}  // namespace riskrjt
