#pragma once

#include "riskrjt/config_index.hpp"
#include "riskrjt/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace riskrjt {

struct VarId {
    std::uint32_t index = 0;

    friend auto operator<=>(const VarId&, const VarId&) = default;
};

enum class Domain { Continuous, Binary, Free };

struct Variable {
    std::string name;
    Domain domain = Domain::Continuous;
    double lower = 0.0;
    double upper = 1.0;
};

struct Term {
    double coef = 0.0;
    VarId var;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

std::string_view to_string(Sense s) noexcept;

/// Row active only when `binary` takes `value`.
struct Indicator {
    VarId binary;
    int value = 1;
};

struct LinearConstraint {
    std::vector<Term> terms;
    Sense sense = Sense::Equal;
    double rhs = 0.0;
    std::string family;
    std::string tag;
    std::optional<Indicator> indicator;

    double activity(std::span<const double> x) const;
    /// Amount by which `x` violates the row (0 when satisfied or when the
    /// indicator is inactive).
    double violation(std::span<const double> x) const;
};

/// μ variables of one cluster, contiguous, indexed by cluster configuration.
struct ClusterBlock {
    std::uint32_t root = 0;
    ConfigIndexer configs;
    VarId first;

    VarId mu(std::uint64_t config) const { return {first.index + static_cast<std::uint32_t>(config)}; }
};

/// δ variables of one decision: info-configuration outer, state inner.
struct DecisionBlock {
    std::uint32_t decision = 0;
    ConfigIndexer info;
    std::size_t states = 0;
    VarId first;

    VarId delta(std::uint64_t info_config, int state) const {
        return {first.index + static_cast<std::uint32_t>(info_config * states + static_cast<std::size_t>(state))};
    }
};

/// CVaR variables over the sorted distinct utilities of the value node.
struct CvarBlock {
    std::uint32_t value_node = 0;
    double alpha = 1.0;
    double epsilon = 0.0;
    double big_m = 0.0;
    std::vector<double> utilities;
    /// For each utility, the value-cluster configurations attaining it.
    std::vector<std::vector<std::uint64_t>> configs;
    VarId eta;
    VarId lambda;
    VarId lambda_bar;
    VarId rho;
    VarId rho_bar;

    VarId at(VarId first, std::size_t k) const { return {first.index + static_cast<std::uint32_t>(k)}; }
};

/// Lookup from model structure to variables.
struct Catalog {
    std::vector<ClusterBlock> clusters;
    std::vector<DecisionBlock> decisions;
    std::optional<CvarBlock> cvar;

    const ClusterBlock& cluster(std::uint32_t root) const;
    const DecisionBlock& decision(std::uint32_t node) const;
};

struct ModelStats {
    std::size_t variables = 0;
    std::size_t continuous = 0;
    std::size_t binary = 0;
    std::size_t free = 0;
    std::size_t constraints = 0;
    std::size_t nonzeros = 0;
    std::map<std::string, std::size_t> rows_by_family;

    std::size_t rows(const std::string& family) const {
        auto it = rows_by_family.find(family);
        return it == rows_by_family.end() ? 0 : it->second;
    }
};

/// Solver-independent maximization model.
class MipModel {
public:
    /// Throws Error on a duplicate or empty name.
    VarId add_variable(std::string name, Domain domain, double lower = 0.0, double upper = 1.0);
    void add_constraint(LinearConstraint row);
    void set_objective(std::vector<Term> terms) { objective_ = std::move(terms); }

    std::span<const Variable> variables() const noexcept { return variables_; }
    const Variable& variable(VarId id) const { return variables_.at(id.index); }
    std::span<const LinearConstraint> constraints() const noexcept { return constraints_; }
    std::span<const Term> objective() const noexcept { return objective_; }
    std::optional<VarId> find(std::string_view name) const;

    double objective_value(std::span<const double> x) const;

    Catalog& catalog() noexcept { return catalog_; }
    const Catalog& catalog() const noexcept { return catalog_; }

private:
    std::vector<Variable> variables_;
    std::vector<LinearConstraint> constraints_;
    std::vector<Term> objective_;
    std::unordered_map<std::string, VarId> by_name_;
    Catalog catalog_;
};

ModelStats model_stats(const MipModel& model);

struct RowViolation {
    std::size_t row = 0;
    double amount = 0.0;
};

/// Rows violated by more than `tolerance`, plus variables outside their
/// bounds or binaries off {0,1} (reported with row = constraint count + var).
std::vector<RowViolation> check_assignment(const MipModel& model, std::span<const double> x,
                                           double tolerance);

}  // namespace riskrjt
