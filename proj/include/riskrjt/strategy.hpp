#pragma once

#include "riskrjt/config_index.hpp"
#include "riskrjt/diagram.hpp"

#include <compare>
#include <cstdint>
#include <iterator>
#include <vector>

namespace riskrjt {

/// Deterministic local decision rule: one chosen state per configuration of
/// the decision's information set.
struct DecisionRule {
    NodeId decision;
    std::vector<int> choice;

    friend auto operator<=>(const DecisionRule&, const DecisionRule&) = default;
};

/// One rule per decision node, in declaration order. Comparison is
/// lexicographic, which is the enumeration and tie-break order.
struct Strategy {
    std::vector<DecisionRule> rules;

    const DecisionRule& rule(NodeId decision) const;
    int choose(NodeId decision, std::uint64_t info_config) const {
        return rule(decision).choice[info_config];
    }

    friend auto operator<=>(const Strategy&, const Strategy&) = default;
};

/// Throws Error unless `s` has exactly one in-range choice per information
/// configuration of every decision node of `d`.
void check_feasible(const InfluenceDiagram& d, const Strategy& s);

/// The same choice everywhere: state `state` of every decision.
Strategy constant_strategy(const InfluenceDiagram& d, int state);

/// Every deterministic strategy of a diagram, addressed by a flat index.
/// Slots are (decision, info-configuration) pairs in declaration order, each
/// with radix |S_d|; the first slot is most significant, so index order equals
/// lexicographic strategy order.
class StrategySpace {
public:
    StrategySpace(const InfluenceDiagram& d, const Caps& caps = {});

    std::uint64_t size() const noexcept { return count_; }
    Strategy at(std::uint64_t index) const;
    void at_into(std::uint64_t index, Strategy& out) const;
    std::uint64_t index_of(const Strategy& s) const;

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Strategy;
        using difference_type = std::ptrdiff_t;
        using pointer = const Strategy*;
        using reference = const Strategy&;

        iterator() = default;
        iterator(const StrategySpace* space, std::uint64_t index);
        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++();
        iterator operator++(int) {
            iterator copy = *this;
            ++*this;
            return copy;
        }
        bool operator==(const iterator& other) const { return index_ == other.index_; }

    private:
        const StrategySpace* space_ = nullptr;
        std::uint64_t index_ = 0;
        Strategy current_;
    };

    iterator begin() const { return iterator(this, 0); }
    iterator end() const { return iterator(this, count_); }

private:
    Strategy shape_;
    std::vector<std::size_t> slot_rule_;
    std::vector<std::size_t> slot_config_;
    ConfigIndexer slots_;
    std::uint64_t count_ = 1;
};

/// Number of deterministic strategies, saturating at UINT64_MAX.
std::uint64_t strategy_count(const InfluenceDiagram& d);

/// Lexicographic enumeration of all strategies. Throws CapExceeded with the
/// computed count when it exceeds `caps.strategies`.
StrategySpace enumerate_strategies(const InfluenceDiagram& d, const Caps& caps = {});

}  // namespace riskrjt
