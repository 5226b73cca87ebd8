#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/junction_tree.hpp"
#include "riskrjt/mip_model.hpp"
#include "riskrjt/risk.hpp"

#include <optional>
#include <span>

namespace riskrjt {

struct BuildOptions {
    /// Emit decision coupling as indicator rows instead of big-M rows.
    bool indicator_rows = false;
    Caps caps;
};

/// Variables, expected-utility objective and the probability rows of a tree:
/// per-cluster normalization, local consistency per arc, chance/value
/// coupling to the CPTs, decision coupling to δ, and Σδ = 1 per information
/// configuration. Node names must be [A-Za-z0-9_]+.
///
/// Throws CapExceeded when a cluster's state space exceeds
/// `caps.cluster_states` (model size grows with cluster state spaces).
MipModel build_base_model(const RootedJunctionTree& t, const InfluenceDiagram& d,
                          const BuildOptions& options = {});

/// Decision coupling rows of the cluster rooted at decision `j`:
///   μ(s) <= δ(s_j | s_I(j))
///   Σ_{s_j' != s_j} μ(s with s_j') + δ(s_j | s_I(j)) <= 1
/// which is μ(s) >= μ̄(s without s_j) - (1 - δ) after cancelling μ(s).
void linearize_decision_coupling(MipModel& model, const InfluenceDiagram& d, NodeId j,
                                 bool indicator_rows = false);

/// Cluster used for a constraint over `scope`: the pinned one if given,
/// otherwise the root cluster of the latest scope node when it holds the
/// whole scope, otherwise the first cluster (tree order) that does.
/// Throws Error suggesting modify/merge when no cluster holds the scope.
NodeId choose_cluster(const RootedJunctionTree& t, const InfluenceDiagram& d,
                      std::span<const NodeId> scope, std::optional<NodeId> pinned = std::nullopt);

/// Chance, logical, budget and CVaR-bound rows. CVaR needs a single value
/// node; its variables are created on first use.
void add_risk(MipModel& model, const RiskSpec& spec, const RootedJunctionTree& t,
              const InfluenceDiagram& d);

/// Creates the CVaR variables and rows for level alpha (once per model).
const CvarBlock& ensure_cvar_block(MipModel& model, double alpha, const RootedJunctionTree& t,
                                   const InfluenceDiagram& d);

/// Replaces the objective with (1/alpha) Σ_k ρ̄_k u_k.
void set_cvar_objective(MipModel& model, double alpha, const RootedJunctionTree& t,
                        const InfluenceDiagram& d);

MipModel build_model(const Problem& problem, const RootedJunctionTree& t, const InfluenceDiagram& d,
                     const BuildOptions& options = {});

/// Full node-indexed state vector of a cluster configuration; nodes outside
/// the cluster are set to -1.
void cluster_states(const InfluenceDiagram& d, const RootedJunctionTree& t, NodeId root,
                    std::uint64_t config, std::vector<int>& out);

}  // namespace riskrjt
