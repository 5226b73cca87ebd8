#include "riskrjt/reference_solver.hpp"

#include "riskrjt/inference.hpp"

#include <algorithm>
#include <cmath>

namespace riskrjt {

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

std::size_t block_index(const Catalog& cat, NodeId root) {
    for (std::size_t k = 0; k < cat.clusters.size(); ++k) {
        if (cat.clusters[k].root == root.value) return k;
    }
    throw Error("model has no cluster block for node " + std::to_string(root.value));
}

std::vector<std::uint64_t> restrict_to(const ConfigIndexer& from, const ConfigIndexer& onto) {
    std::vector<std::size_t> pos;
    for (NodeId n : onto.scope()) {
        auto it = std::find(from.scope().begin(), from.scope().end(), n);
        if (it == from.scope().end()) throw Error("separator node missing from cluster");
        pos.push_back(static_cast<std::size_t>(it - from.scope().begin()));
    }
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

}  // namespace

ReferenceEvaluator::ReferenceEvaluator(const MipModel& model, const RootedJunctionTree& t,
                                       const InfluenceDiagram& d)
    : model_(&model), d_(&d) {
    const Catalog& cat = model.catalog();
    if (cat.clusters.size() != d.size()) throw Error("model does not match the junction tree");
    for (NodeId j : t.preorder()) {
        ClusterPlan plan;
        plan.node = j;
        plan.decision = d.kind(j) == NodeKind::Decision;
        plan.block = block_index(cat, j);
        const ConfigIndexer& ix = cat.clusters[plan.block].configs;
        if (ix.total() != d.indexer(t.cluster(j)).total()) throw Error("model does not match the junction tree");

        std::vector<NodeId> sep;
        for (NodeId x : ix.scope()) {
            if (x != j) sep.push_back(x);
        }
        const ConfigIndexer sep_ix = d.indexer(sep);
        plan.sep_size = sep_ix.total();
        plan.self_to_sep = restrict_to(ix, sep_ix);
        if (auto p = t.parent(j)) {
            plan.parent_block = block_index(cat, *p);
            plan.parent_to_sep = restrict_to(cat.clusters[*plan.parent_block].configs, sep_ix);
        } else if (!sep.empty()) {
            throw Error("root cluster " + d.name(j) + " holds more than its root node");
        }

        const ConfigIndexer cond = d.indexer(d.parents(j));
        const auto to_cond = restrict_to(ix, cond);
        const std::size_t own = static_cast<std::size_t>(
            std::find(ix.scope().begin(), ix.scope().end(), j) - ix.scope().begin());
        plan.own_state.resize(ix.total());
        plan.cond_config = to_cond;
        for (std::uint64_t c = 0; c < ix.total(); ++c) plan.own_state[c] = ix.digit(c, own);
        plans_.push_back(std::move(plan));
    }
}

void ReferenceEvaluator::assign(const Strategy& s, std::vector<double>& x) const {
    const Catalog& cat = model_->catalog();
    x.assign(model_->variables().size(), 0.0);

    for (const DecisionBlock& b : cat.decisions) {
        const DecisionRule& rule = s.rule(NodeId{b.decision});
        for (std::uint64_t i = 0; i < b.info.total(); ++i) x[b.delta(i, rule.choice[i]).index] = 1.0;
    }

    std::vector<double> marg;
    for (const ClusterPlan& plan : plans_) {
        const ClusterBlock& block = cat.clusters[plan.block];
        marg.assign(plan.sep_size, 0.0);
        if (plan.parent_block) {
            const ClusterBlock& up = cat.clusters[*plan.parent_block];
            for (std::uint64_t c = 0; c < up.configs.total(); ++c) {
                marg[plan.parent_to_sep[c]] += x[up.mu(c).index];
            }
        } else {
            marg[0] = 1.0;
        }
        const DecisionRule* rule = plan.decision ? &s.rule(plan.node) : nullptr;
        for (std::uint64_t c = 0; c < block.configs.total(); ++c) {
            const std::uint64_t cond = plan.cond_config[c];
            const double factor = rule ? (rule->choice[cond] == plan.own_state[c] ? 1.0 : 0.0)
                                       : d_->probability(plan.node, cond, plan.own_state[c]);
            x[block.mu(c).index] = marg[plan.self_to_sep[c]] * factor;
        }
    }

    if (const auto& cv = cat.cvar) {
        const ClusterBlock& vb = cat.cluster(cv->value_node);
        const std::size_t n = cv->utilities.size();
        std::vector<double> p(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::uint64_t c : cv->configs[k]) p[k] += x[vb.mu(c).index];
        }
        const TailWeights tw = tail_weights(cv->utilities, p, cv->alpha);
        const double eta = cv->utilities[tw.var_atom];
        x[cv->eta.index] = eta;
        for (std::size_t k = 0; k < n; ++k) {
            const double u = cv->utilities[k];
            const bool below = u < eta;
            x[cv->at(cv->lambda, k).index] = below ? 1.0 : 0.0;
            x[cv->at(cv->lambda_bar, k).index] = u <= eta ? 1.0 : 0.0;
            x[cv->at(cv->rho, k).index] = below ? p[k] : 0.0;
            x[cv->at(cv->rho_bar, k).index] = tw.weights[k];
        }
    }
}

std::vector<double> ReferenceEvaluator::assignment(const Strategy& s) const {
    std::vector<double> x;
    assign(s, x);
    return x;
}

double ReferenceEvaluator::score(const Strategy& s, std::vector<double>& scratch, double tolerance) const {
    assign(s, scratch);
    for (const auto& row : model_->constraints()) {
        if (row.violation(scratch) > tolerance) return std::nan("");
    }
    return model_->objective_value(scratch);
}

Solution solve_reference(const MipModel& model, const RootedJunctionTree& t, const InfluenceDiagram& d,
                         const ReferenceOptions& options) {
    const ReferenceEvaluator eval(model, t, d);
    const StrategySpace space = enumerate_strategies(d, options.caps);
    const auto scores = sweep(
        space.size(), options.policy,
        [&]() -> ScoreFn {
            return [&, s = Strategy{}, x = std::vector<double>{}](std::uint64_t i) mutable {
                space.at_into(i, s);
                return eval.score(s, x, options.tolerance);
            };
        },
        options.threads);

    Solution sol;
    sol.source = "reference";
    const Best best = select_best(scores);
    if (!best.index) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    sol.status = SolveStatus::Optimal;
    sol.values = eval.assignment(space.at(*best.index));
    sol.objective = model.objective_value(sol.values);
    sol.argmax = best.ties;
    return sol;
}

}  // namespace riskrjt
