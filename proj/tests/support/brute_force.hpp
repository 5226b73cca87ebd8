#pragma once

// Test oracles that share no code with the library's inference: a plain
// odometer over every joint configuration, multiplying table entries.

#include "riskrjt/diagram.hpp"
#include "riskrjt/strategy.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace riskrjt::testing {

inline std::uint64_t row_of(const InfluenceDiagram& d, NodeId n, const std::vector<int>& states) {
    std::uint64_t row = 0;
    for (NodeId p : d.parents(n)) row = row * d.state_count(p) + static_cast<std::uint64_t>(states[p.index()]);
    return row;
}

/// Calls visit(states, probability) for every joint configuration, zero
/// probability included.
template <class Visit>
void brute_joint(const InfluenceDiagram& d, const Strategy& s, Visit&& visit) {
    const std::size_t n = d.size();
    std::vector<int> states(n, 0);
    while (true) {
        double p = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const NodeId id{k};
            const std::uint64_t row = row_of(d, id, states);
            if (d.kind(id) == NodeKind::Decision) {
                const auto& rule = s.rule(id);
                p *= rule.choice[row] == states[k] ? 1.0 : 0.0;
            } else {
                p *= d.cpt(id)[row * d.state_count(id) + static_cast<std::size_t>(states[k])];
            }
        }
        visit(std::span<const int>(states), p);
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++states[k] < static_cast<int>(d.state_count(NodeId{k}))) break;
            states[k] = 0;
            if (k == 0) return;
        }
        if (n == 0) return;
    }
}

/// Utility distribution keyed by total utility rounded to 1e-9.
inline std::map<double, double> brute_distribution(const InfluenceDiagram& d, const Strategy& s) {
    std::map<double, double> out;
    brute_joint(d, s, [&](std::span<const int> states, double p) {
        if (p == 0.0) return;
        double u = 0.0;
        for (NodeId v : d.nodes_of(NodeKind::Value)) u += d.utility(v)[static_cast<std::size_t>(states[v.index()])];
        out[std::round(u * 1e9) / 1e9] += p;
    });
    return out;
}

inline double brute_expected(const InfluenceDiagram& d, const Strategy& s) {
    double eu = 0.0;
    for (auto [u, p] : brute_distribution(d, s)) eu += u * p;
    return eu;
}

/// Lower-tail CVaR by sorting atoms and filling alpha of mass from below.
inline double brute_cvar(const std::map<double, double>& dist, double alpha) {
    double left = alpha;
    double acc = 0.0;
    for (auto [u, p] : dist) {
        const double take = std::min(p, left);
        acc += take * u;
        left -= take;
        if (left <= 0.0) break;
    }
    return acc / alpha;
}

}  // namespace riskrjt::testing
