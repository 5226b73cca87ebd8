#pragma once

#include "riskrjt/diagram.hpp"
#include "riskrjt/junction_tree.hpp"
#include "riskrjt/mip_model.hpp"
#include "riskrjt/solution.hpp"
#include "riskrjt/strategy.hpp"
#include "riskrjt/sweep.hpp"

#include <vector>

namespace riskrjt {

/// Builds the unique model assignment implied by a fixed strategy: δ from
/// the strategy, μ propagated from the tree root (each cluster's separator
/// marginal comes from its parent, then the CPT or δ is applied), and the
/// CVaR variables set to their tail semantics.
class ReferenceEvaluator {
public:
    /// Throws Error when the model was not built from this tree and diagram.
    ReferenceEvaluator(const MipModel& model, const RootedJunctionTree& t, const InfluenceDiagram& d);

    void assign(const Strategy& s, std::vector<double>& x) const;
    std::vector<double> assignment(const Strategy& s) const;

    /// Objective of the assignment, or NaN when a row is violated by more
    /// than `tolerance`.
    double score(const Strategy& s, std::vector<double>& scratch, double tolerance) const;

private:
    struct ClusterPlan {
        std::size_t block = 0;
        std::optional<std::size_t> parent_block;
        std::uint64_t sep_size = 1;
        std::vector<std::uint64_t> parent_to_sep;
        std::vector<std::uint64_t> self_to_sep;
        /// Per configuration: own state and parent (or info) configuration.
        std::vector<int> own_state;
        std::vector<std::uint64_t> cond_config;
        NodeId node;
        bool decision = false;
    };

    const MipModel* model_;
    const InfluenceDiagram* d_;
    std::vector<ClusterPlan> plans_;
};

struct ReferenceOptions {
    Caps caps;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
    int threads = 0;
    double tolerance = 1e-9;
};

/// Exact solve by enumerating every strategy and scoring its implied
/// assignment. Ties go to the lexicographically smallest strategy.
Solution solve_reference(const MipModel& model, const RootedJunctionTree& t, const InfluenceDiagram& d,
                         const ReferenceOptions& options = {});

}  // namespace riskrjt
