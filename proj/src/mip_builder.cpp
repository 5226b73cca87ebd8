#include "riskrjt/mip_builder.hpp"

#include "riskrjt/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskrjt {

namespace {

bool valid_name(const std::string& name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

std::string cname(const InfluenceDiagram& d, NodeId j) { return "C_" + d.name(j); }

std::size_t position_in(std::span<const NodeId> scope, NodeId n) {
    return static_cast<std::size_t>(std::find(scope.begin(), scope.end(), n) - scope.begin());
}

/// Maps each configuration of `from` onto the index of its restriction to
/// `onto` (which must be a subset of `from`).
std::vector<std::uint64_t> projection(const ConfigIndexer& from, const ConfigIndexer& onto) {
    std::vector<std::size_t> pos;
    for (NodeId n : onto.scope()) pos.push_back(position_in(from.scope(), n));
    std::vector<std::uint64_t> out(from.total());
    for (std::uint64_t c = 0; c < from.total(); ++c) {
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < pos.size(); ++k) {
            idx += static_cast<std::uint64_t>(from.digit(c, pos[k])) * onto.strides()[k];
        }
        out[c] = idx;
    }
    return out;
}

std::vector<VarId> matching_mu(const MipModel& model, const RootedJunctionTree& t, const InfluenceDiagram& d,
                               NodeId root, const auto& pred) {
    const ClusterBlock& block = model.catalog().cluster(root.value);
    std::vector<VarId> out;
    std::vector<int> states;
    for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
        cluster_states(d, t, root, c, states);
        if (pred(std::span<const int>(states))) out.push_back(block.mu(c));
    }
    return out;
}

std::vector<Term> unit_terms(std::span<const VarId> vars) {
    std::vector<Term> out;
    for (VarId v : vars) out.push_back({1.0, v});
    return out;
}

}  // namespace

void cluster_states(const InfluenceDiagram& d, const RootedJunctionTree& t, NodeId root,
                    std::uint64_t config, std::vector<int>& out) {
    out.assign(d.size(), -1);
    const auto& members = t.cluster(root);
    std::uint64_t rest = config;
    for (std::size_t k = members.size(); k-- > 0;) {
        const std::size_t r = d.state_count(members[k]);
        out[members[k].index()] = static_cast<int>(rest % r);
        rest /= r;
    }
}

MipModel build_base_model(const RootedJunctionTree& t, const InfluenceDiagram& d,
                          const BuildOptions& options) {
    if (auto violations = validate_rjt(t, d); !violations.empty()) {
        throw Error("junction tree is invalid for this diagram: " + violations.front().message);
    }
    for (NodeId id : d.ids()) {
        if (!valid_name(d.name(id))) {
            throw Error("node name '" + d.name(id) + "' is not usable in variable names ([A-Za-z0-9_]+)");
        }
    }
    MipModel model;
    Catalog& cat = model.catalog();

    for (NodeId j : t.order()) {
        ConfigIndexer ix = d.indexer(t.cluster(j));
        if (ix.total() > options.caps.cluster_states) {
            throw CapExceeded("state space of cluster " + cname(d, j), ix.total(),
                              options.caps.cluster_states);
        }
        ClusterBlock block{j.value, ix, VarId{}};
        for (std::uint64_t c = 0; c < ix.total(); ++c) {
            VarId v = model.add_variable("mu_" + d.name(j) + "_" + std::to_string(c), Domain::Continuous);
            if (c == 0) block.first = v;
        }
        cat.clusters.push_back(std::move(block));
    }
    for (NodeId j : t.order()) {
        if (d.kind(j) != NodeKind::Decision) continue;
        ConfigIndexer info = d.parent_indexer(j);
        DecisionBlock block{j.value, info, d.state_count(j), VarId{}};
        for (std::uint64_t i = 0; i < info.total(); ++i) {
            for (std::size_t s = 0; s < block.states; ++s) {
                VarId v = model.add_variable(
                    "delta_" + d.name(j) + "_" + std::to_string(i) + "_" + std::to_string(s), Domain::Binary);
                if (i == 0 && s == 0) block.first = v;
            }
        }
        cat.decisions.push_back(std::move(block));
    }

    // Expected utility.
    std::vector<Term> objective;
    std::vector<int> states;
    for (NodeId j : t.order()) {
        if (d.kind(j) != NodeKind::Value) continue;
        const ClusterBlock& block = cat.cluster(j.value);
        for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
            cluster_states(d, t, j, c, states);
            objective.push_back({d.utility(j)[states[j.index()]], block.mu(c)});
        }
    }
    model.set_objective(std::move(objective));

    for (NodeId j : t.order()) {
        const ClusterBlock& block = cat.cluster(j.value);
        LinearConstraint row{{}, Sense::Equal, 1.0, "normalization", "normalize " + cname(d, j), {}};
        for (std::uint64_t c = 0; c < block.configs.total(); ++c) row.terms.push_back({1.0, block.mu(c)});
        model.add_constraint(std::move(row));
    }

    for (auto [pi, cj] : t.arcs()) {
        const ClusterBlock& up = cat.cluster(pi.value);
        const ClusterBlock& down = cat.cluster(cj.value);
        std::vector<NodeId> shared;
        for (NodeId x : t.cluster(cj)) {
            if (t.contains(pi, x)) shared.push_back(x);
        }
        const ConfigIndexer sep = d.indexer(shared);
        const auto up_proj = projection(up.configs, sep);
        const auto down_proj = projection(down.configs, sep);
        std::vector<LinearConstraint> rows(sep.total());
        for (std::uint64_t s = 0; s < sep.total(); ++s) {
            rows[s] = {{}, Sense::Equal, 0.0, "consistency",
                       "consistency " + cname(d, pi) + " -> " + cname(d, cj) + " sep " + std::to_string(s), {}};
        }
        for (std::uint64_t c = 0; c < up.configs.total(); ++c) rows[up_proj[c]].terms.push_back({1.0, up.mu(c)});
        for (std::uint64_t c = 0; c < down.configs.total(); ++c) {
            rows[down_proj[c]].terms.push_back({-1.0, down.mu(c)});
        }
        for (auto& row : rows) model.add_constraint(std::move(row));
    }

    for (NodeId j : t.order()) {
        if (d.kind(j) == NodeKind::Decision) {
            linearize_decision_coupling(model, d, j, options.indicator_rows);
            continue;
        }
        const ClusterBlock& block = cat.cluster(j.value);
        const auto members = block.configs.scope();
        const std::size_t own = position_in(members, j);
        const std::uint64_t stride = block.configs.strides()[own];
        const std::size_t nstates = d.state_count(j);
        const ConfigIndexer pix = d.parent_indexer(j);
        std::vector<std::size_t> ppos;
        for (NodeId p : d.parents(j)) ppos.push_back(position_in(members, p));
        for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
            const int sj = block.configs.digit(c, own);
            std::uint64_t pcfg = 0;
            for (std::size_t k = 0; k < ppos.size(); ++k) {
                pcfg += static_cast<std::uint64_t>(block.configs.digit(c, ppos[k])) * pix.strides()[k];
            }
            const double p = d.probability(j, pcfg, sj);
            const std::uint64_t base = c - static_cast<std::uint64_t>(sj) * stride;
            LinearConstraint row{{}, Sense::Equal, 0.0, "chance-coupling",
                                 "coupling " + cname(d, j) + " cfg " + std::to_string(c), {}};
            // 1 - p taken as the sum of the rest of the CPT row.
            double rest = 0.0;
            for (std::size_t s = 0; s < nstates; ++s) {
                if (static_cast<int>(s) != sj) rest += d.probability(j, pcfg, static_cast<int>(s));
            }
            for (std::size_t s = 0; s < nstates; ++s) {
                const double coef = static_cast<int>(s) == sj ? rest : -p;
                row.terms.push_back({coef, block.mu(base + s * stride)});
            }
            model.add_constraint(std::move(row));
        }
    }

    for (const DecisionBlock& block : cat.decisions) {
        for (std::uint64_t i = 0; i < block.info.total(); ++i) {
            LinearConstraint row{{}, Sense::Equal, 1.0, "decision-sum",
                                 "rule " + d.name(NodeId{block.decision}) + " info " + std::to_string(i), {}};
            for (std::size_t s = 0; s < block.states; ++s) {
                row.terms.push_back({1.0, block.delta(i, static_cast<int>(s))});
            }
            model.add_constraint(std::move(row));
        }
    }
    return model;
}

void linearize_decision_coupling(MipModel& model, const InfluenceDiagram& d, NodeId j, bool indicator_rows) {
    if (d.kind(j) != NodeKind::Decision) throw Error(d.name(j) + " is not a decision node");
    const ClusterBlock block = model.catalog().cluster(j.value);
    const DecisionBlock dblock = model.catalog().decision(j.value);
    const auto members = block.configs.scope();
    const std::size_t own = position_in(members, j);
    const std::uint64_t stride = block.configs.strides()[own];
    const std::size_t nstates = d.state_count(j);
    std::vector<std::size_t> ppos;
    for (NodeId p : d.parents(j)) ppos.push_back(position_in(members, p));

    for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
        const int sj = block.configs.digit(c, own);
        std::uint64_t icfg = 0;
        for (std::size_t k = 0; k < ppos.size(); ++k) {
            icfg += static_cast<std::uint64_t>(block.configs.digit(c, ppos[k])) * dblock.info.strides()[k];
        }
        const VarId delta = dblock.delta(icfg, sj);
        const std::uint64_t base = c - static_cast<std::uint64_t>(sj) * stride;
        const std::string tag = cname(d, j) + " cfg " + std::to_string(c);

        std::vector<Term> others;
        for (std::size_t s = 0; s < nstates; ++s) {
            if (static_cast<int>(s) != sj) others.push_back({1.0, block.mu(base + s * stride)});
        }
        if (indicator_rows) {
            model.add_constraint({{{1.0, block.mu(c)}}, Sense::LessEqual, 0.0, "decision-coupling",
                                  tag + " off", Indicator{delta, 0}});
            if (!others.empty()) {
                model.add_constraint({std::move(others), Sense::LessEqual, 0.0, "decision-coupling",
                                      tag + " on", Indicator{delta, 1}});
            }
        } else {
            model.add_constraint({{{1.0, block.mu(c)}, {-1.0, delta}}, Sense::LessEqual, 0.0,
                                  "decision-coupling", tag + " upper", {}});
            others.push_back({1.0, delta});
            model.add_constraint({std::move(others), Sense::LessEqual, 1.0, "decision-coupling",
                                  tag + " lower", {}});
        }
    }
}

NodeId choose_cluster(const RootedJunctionTree& t, const InfluenceDiagram& d, std::span<const NodeId> scope,
                      std::optional<NodeId> pinned) {
    auto holds_all = [&](NodeId root) {
        return std::all_of(scope.begin(), scope.end(), [&](NodeId n) { return t.contains(root, n); });
    };
    std::string names;
    for (NodeId n : scope) names += (names.empty() ? "" : ",") + d.name(n);
    if (pinned) {
        if (!holds_all(*pinned)) {
            throw Error("cluster " + cname(d, *pinned) + " does not contain {" + names + "}");
        }
        return *pinned;
    }
    if (scope.empty()) return t.order().front();
    const NodeId latest = *std::max_element(scope.begin(), scope.end(),
                                            [&](NodeId a, NodeId b) { return t.rank(a) < t.rank(b); });
    if (holds_all(latest)) return latest;
    for (NodeId j : t.order()) {
        if (holds_all(j)) return j;
    }
    throw Error("no cluster contains {" + names + "}; modify the tree first (rjt --modify " + names +
                ") or merge value nodes if the scope is value nodes and their parents");
}

const CvarBlock& ensure_cvar_block(MipModel& model, double alpha, const RootedJunctionTree& t,
                                   const InfluenceDiagram& d) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
    Catalog& cat = model.catalog();
    if (cat.cvar) {
        if (cat.cvar->alpha != alpha) throw Error("a model supports one CVaR level only");
        return *cat.cvar;
    }
    const auto values = d.nodes_of(NodeKind::Value);
    if (values.size() != 1) {
        throw Error("CVaR needs a single value node; merge value nodes first (--merge-values)");
    }
    const NodeId v = values.front();
    const ClusterBlock block = cat.cluster(v.value);

    CvarBlock cv;
    cv.value_node = v.value;
    cv.alpha = alpha;
    std::vector<double> per_config(block.configs.total());
    std::vector<int> states;
    for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
        cluster_states(d, t, v, c, states);
        per_config[c] = round_significant(d.utility(v)[states[v.index()]]);
        cv.utilities.push_back(per_config[c]);
    }
    std::sort(cv.utilities.begin(), cv.utilities.end());
    cv.utilities.erase(std::unique(cv.utilities.begin(), cv.utilities.end()), cv.utilities.end());
    cv.configs.resize(cv.utilities.size());
    for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
        auto it = std::lower_bound(cv.utilities.begin(), cv.utilities.end(), per_config[c]);
        cv.configs[static_cast<std::size_t>(it - cv.utilities.begin())].push_back(c);
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < cv.utilities.size(); ++k) gap = std::min(gap, cv.utilities[k] - cv.utilities[k - 1]);
    cv.epsilon = std::isfinite(gap) ? 0.5 * gap : 1.0;
    cv.big_m = (cv.utilities.back() - cv.utilities.front()) + cv.epsilon;

    const std::size_t n = cv.utilities.size();
    const double inf = std::numeric_limits<double>::infinity();
    cv.eta = model.add_variable("eta", Domain::Free, -inf, inf);
    for (std::size_t k = 0; k < n; ++k) {
        VarId id = model.add_variable("lam_" + std::to_string(k), Domain::Binary);
        if (k == 0) cv.lambda = id;
    }
    for (std::size_t k = 0; k < n; ++k) {
        VarId id = model.add_variable("lambar_" + std::to_string(k), Domain::Binary);
        if (k == 0) cv.lambda_bar = id;
    }
    for (std::size_t k = 0; k < n; ++k) {
        VarId id = model.add_variable("rho_" + std::to_string(k), Domain::Continuous);
        if (k == 0) cv.rho = id;
    }
    for (std::size_t k = 0; k < n; ++k) {
        VarId id = model.add_variable("rhobar_" + std::to_string(k), Domain::Continuous);
        if (k == 0) cv.rho_bar = id;
    }

    const double M = cv.big_m;
    const double eps = cv.epsilon;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = cv.utilities[k];
        const VarId lam = cv.at(cv.lambda, k);
        const VarId lamb = cv.at(cv.lambda_bar, k);
        const VarId rho = cv.at(cv.rho, k);
        const VarId rhob = cv.at(cv.rho_bar, k);
        const std::string tag = "cvar u" + std::to_string(k);
        auto p_terms = [&](double coef) {
            std::vector<Term> out;
            for (std::uint64_t c : cv.configs[k]) out.push_back({coef, block.mu(c)});
            return out;
        };
        auto with = [](std::vector<Term> a, std::initializer_list<Term> b) {
            a.insert(a.end(), b.begin(), b.end());
            return a;
        };
        // eta <= u when lam = 0, eta >= u + eps when lam = 1.
        model.add_constraint({{{1.0, cv.eta}, {-M, lam}}, Sense::LessEqual, u, "cvar", tag + " below-upper", {}});
        model.add_constraint(
            {{{1.0, cv.eta}, {-(M + eps), lam}}, Sense::GreaterEqual, u - M, "cvar", tag + " below-lower", {}});
        // eta <= u - eps when lambar = 0, eta >= u when lambar = 1.
        model.add_constraint(
            {{{1.0, cv.eta}, {-(M + eps), lamb}}, Sense::LessEqual, u - eps, "cvar", tag + " atmost-upper", {}});
        model.add_constraint({{{1.0, cv.eta}, {-M, lamb}}, Sense::GreaterEqual, u - M, "cvar", tag + " atmost-lower", {}});
        model.add_constraint({{{1.0, rhob}, {-1.0, lamb}}, Sense::LessEqual, 0.0, "cvar", tag + " tail-gate", {}});
        model.add_constraint(
            {with(p_terms(1.0), {{-1.0, rho}, {1.0, lam}}), Sense::LessEqual, 1.0, "cvar", tag + " below-mass", {}});
        model.add_constraint({{{1.0, rho}, {-1.0, lam}}, Sense::LessEqual, 0.0, "cvar", tag + " below-gate", {}});
        model.add_constraint({{{1.0, rho}, {-1.0, rhob}}, Sense::LessEqual, 0.0, "cvar", tag + " tail-lower", {}});
        model.add_constraint(
            {with(p_terms(-1.0), {{1.0, rhob}}), Sense::LessEqual, 0.0, "cvar", tag + " tail-upper", {}});
    }
    LinearConstraint total{{}, Sense::Equal, alpha, "cvar", "cvar tail mass", {}};
    for (std::size_t k = 0; k < n; ++k) total.terms.push_back({1.0, cv.at(cv.rho_bar, k)});
    model.add_constraint(std::move(total));

    cat.cvar = std::move(cv);
    return *cat.cvar;
}

void set_cvar_objective(MipModel& model, double alpha, const RootedJunctionTree& t, const InfluenceDiagram& d) {
    const CvarBlock& cv = ensure_cvar_block(model, alpha, t, d);
    std::vector<Term> objective;
    for (std::size_t k = 0; k < cv.utilities.size(); ++k) {
        objective.push_back({cv.utilities[k] / alpha, cv.at(cv.rho_bar, k)});
    }
    model.set_objective(std::move(objective));
}

void add_risk(MipModel& model, const RiskSpec& spec, const RootedJunctionTree& t, const InfluenceDiagram& d) {
    if (const auto* c = std::get_if<ChanceSpec>(&spec)) {
        if (c->p < 0.0 || c->p > 1.0) throw Error("chance bound must lie in [0, 1]");
        const auto scope = c->event.scope();
        const NodeId root = choose_cluster(t, d, scope, c->cluster);
        auto vars = matching_mu(model, t, d, root, [&](std::span<const int> s) { return c->event.holds(s); });
        model.add_constraint({unit_terms(vars), c->bound == Bound::AtMost ? Sense::LessEqual : Sense::GreaterEqual,
                              c->p, "chance", "chance on " + cname(d, root), {}});
    } else if (const auto* l = std::get_if<LogicalSpec>(&spec)) {
        const auto scope = l->forbidden.scope();
        const NodeId root = choose_cluster(t, d, scope, l->cluster);
        auto vars = matching_mu(model, t, d, root, [&](std::span<const int> s) { return l->forbidden.holds(s); });
        model.add_constraint({unit_terms(vars), Sense::LessEqual, 0.0, "logical", "logical on " + cname(d, root), {}});
    } else if (const auto* b = std::get_if<BudgetSpec>(&spec)) {
        const auto scope = b->scope();
        const NodeId root = choose_cluster(t, d, scope, b->cluster);
        auto vars = matching_mu(model, t, d, root, [&](std::span<const int> s) { return b->exceeds(s); });
        model.add_constraint({unit_terms(vars), Sense::LessEqual, 0.0, "budget", "budget on " + cname(d, root), {}});
    } else {
        const auto& cv = std::get<CvarBoundSpec>(spec);
        const CvarBlock& block = ensure_cvar_block(model, cv.alpha, t, d);
        LinearConstraint row{{}, Sense::GreaterEqual, cv.alpha * cv.threshold, "cvar-bound", "cvar lower bound", {}};
        for (std::size_t k = 0; k < block.utilities.size(); ++k) {
            row.terms.push_back({block.utilities[k], block.at(block.rho_bar, k)});
        }
        model.add_constraint(std::move(row));
    }
}

MipModel build_model(const Problem& problem, const RootedJunctionTree& t, const InfluenceDiagram& d,
                     const BuildOptions& options) {
    MipModel model = build_base_model(t, d, options);
    if (problem.objective.kind == Objective::Kind::Cvar) set_cvar_objective(model, problem.objective.alpha, t, d);
    for (const auto& spec : problem.constraints) add_risk(model, spec, t, d);
    return model;
}

}  // namespace riskrjt
