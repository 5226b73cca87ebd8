#include "riskrjt/mip_model.hpp"

#include <algorithm>
#include <cmath>

namespace riskrjt {

std::string_view to_string(Sense s) noexcept {
    switch (s) {
        case Sense::LessEqual: return "<=";
        case Sense::Equal: return "=";
        case Sense::GreaterEqual: return ">=";
    }
    return "?";
}

double LinearConstraint::activity(std::span<const double> x) const {
    double a = 0.0;
    for (const auto& t : terms) a += t.coef * x[t.var.index];
    return a;
}

double LinearConstraint::violation(std::span<const double> x) const {
    if (indicator && std::lround(x[indicator->binary.index]) != indicator->value) return 0.0;
    const double a = activity(x);
    switch (sense) {
        case Sense::LessEqual: return std::max(0.0, a - rhs);
        case Sense::GreaterEqual: return std::max(0.0, rhs - a);
        case Sense::Equal: return std::abs(a - rhs);
    }
    return 0.0;
}

const ClusterBlock& Catalog::cluster(std::uint32_t root) const {
    for (const auto& b : clusters) {
        if (b.root == root) return b;
    }
    throw Error("model has no cluster block for node " + std::to_string(root));
}

const DecisionBlock& Catalog::decision(std::uint32_t node) const {
    for (const auto& b : decisions) {
        if (b.decision == node) return b;
    }
    throw Error("model has no decision block for node " + std::to_string(node));
}

VarId MipModel::add_variable(std::string name, Domain domain, double lower, double upper) {
    if (name.empty()) throw Error("variable name must not be empty");
    if (by_name_.contains(name)) throw Error("duplicate variable name " + name);
    VarId id{static_cast<std::uint32_t>(variables_.size())};
    if (domain == Domain::Binary) {
        lower = 0.0;
        upper = 1.0;
    }
    by_name_.emplace(name, id);
    variables_.push_back({std::move(name), domain, lower, upper});
    return id;
}

void MipModel::add_constraint(LinearConstraint row) {
    for (const auto& t : row.terms) {
        if (t.var.index >= variables_.size()) throw Error("constraint references an unknown variable");
        if (!std::isfinite(t.coef)) throw Error("non-finite coefficient in row " + row.tag);
    }
    std::vector<std::uint32_t> ids;
    for (const auto& t : row.terms) ids.push_back(t.var.index);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw Error("variable repeated in row " + row.tag);
    }
    constraints_.push_back(std::move(row));
}

std::optional<VarId> MipModel::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

double MipModel::objective_value(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& t : objective_) v += t.coef * x[t.var.index];
    return v;
}

ModelStats model_stats(const MipModel& model) {
    ModelStats s;
    s.variables = model.variables().size();
    for (const auto& v : model.variables()) {
        switch (v.domain) {
            case Domain::Continuous: ++s.continuous; break;
            case Domain::Binary: ++s.binary; break;
            case Domain::Free: ++s.free; break;
        }
    }
    s.constraints = model.constraints().size();
    for (const auto& row : model.constraints()) {
        ++s.rows_by_family[row.family];
        s.nonzeros += row.terms.size();
    }
    return s;
}

std::vector<RowViolation> check_assignment(const MipModel& model, std::span<const double> x,
                                           double tolerance) {
    std::vector<RowViolation> out;
    const auto rows = model.constraints();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double v = rows[r].violation(x);
        if (v > tolerance) out.push_back({r, v});
    }
    const auto vars = model.variables();
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const Variable& var = vars[k];
        double v = 0.0;
        if (var.domain != Domain::Free) v = std::max({0.0, var.lower - x[k], x[k] - var.upper});
        if (var.domain == Domain::Binary) v = std::max(v, std::abs(x[k] - std::round(x[k])));
        if (!std::isfinite(x[k])) v = INFINITY;
        if (v > tolerance) out.push_back({rows.size() + k, v});
    }
    return out;
}

}  // namespace riskrjt
