#include "riskrjt/strategy.hpp"

#include <algorithm>

namespace riskrjt {

const DecisionRule& Strategy::rule(NodeId decision) const {
    for (const auto& r : rules) {
        if (r.decision == decision) return r;
    }
    throw Error("strategy has no rule for decision id " + std::to_string(decision.value));
}

void check_feasible(const InfluenceDiagram& d, const Strategy& s) {
    auto decisions = d.nodes_of(NodeKind::Decision);
    if (s.rules.size() != decisions.size()) {
        throw Error("strategy covers " + std::to_string(s.rules.size()) + " decisions, diagram has " +
                    std::to_string(decisions.size()));
    }
    for (std::size_t k = 0; k < decisions.size(); ++k) {
        const auto& rule = s.rules[k];
        if (rule.decision != decisions[k]) throw Error("strategy rules out of declaration order");
        const auto configs = d.parent_indexer(rule.decision).total();
        if (rule.choice.size() != configs) {
            throw Error("rule for '" + d.name(rule.decision) + "' has " +
                        std::to_string(rule.choice.size()) + " entries, expected " +
                        std::to_string(configs));
        }
        for (int c : rule.choice) {
            if (c < 0 || static_cast<std::size_t>(c) >= d.state_count(rule.decision)) {
                throw Error("rule for '" + d.name(rule.decision) + "' chooses an invalid state");
            }
        }
    }
}

Strategy constant_strategy(const InfluenceDiagram& d, int state) {
    Strategy s;
    for (NodeId dec : d.nodes_of(NodeKind::Decision)) {
        s.rules.push_back({dec, std::vector<int>(d.parent_indexer(dec).total(), state)});
    }
    return s;
}

std::uint64_t strategy_count(const InfluenceDiagram& d) {
    std::uint64_t count = 1;
    for (NodeId dec : d.nodes_of(NodeKind::Decision)) {
        std::uint64_t configs = 1;
        for (NodeId p : d.parents(dec)) configs = saturating_mul(configs, d.state_count(p));
        for (std::uint64_t c = 0; c < configs && count != UINT64_MAX; ++c) {
            count = saturating_mul(count, d.state_count(dec));
        }
    }
    return count;
}

StrategySpace::StrategySpace(const InfluenceDiagram& d, const Caps& caps) {
    count_ = strategy_count(d);
    if (count_ > caps.strategies) throw CapExceeded("strategy enumeration", count_, caps.strategies);

    std::vector<std::size_t> radices;
    for (NodeId dec : d.nodes_of(NodeKind::Decision)) {
        const auto configs = d.parent_indexer(dec).total();
        shape_.rules.push_back({dec, std::vector<int>(configs, 0)});
        for (std::uint64_t c = 0; c < configs; ++c) {
            slot_rule_.push_back(shape_.rules.size() - 1);
            slot_config_.push_back(c);
            radices.push_back(d.state_count(dec));
        }
    }
    slots_ = ConfigIndexer(std::move(radices));
}

Strategy StrategySpace::at(std::uint64_t index) const {
    Strategy out = shape_;
    at_into(index, out);
    return out;
}

void StrategySpace::at_into(std::uint64_t index, Strategy& out) const {
    if (index >= count_) throw std::out_of_range("strategy index out of range");
    if (out.rules.size() != shape_.rules.size()) out = shape_;
    for (std::size_t k = slot_rule_.size(); k-- > 0;) {
        const std::size_t radix = slots_.radices()[k];
        out.rules[slot_rule_[k]].choice[slot_config_[k]] = static_cast<int>(index % radix);
        index /= radix;
    }
}

std::uint64_t StrategySpace::index_of(const Strategy& s) const {
    std::vector<int> digits(slot_rule_.size());
    for (std::size_t k = 0; k < digits.size(); ++k) {
        digits[k] = s.rules.at(slot_rule_[k]).choice.at(slot_config_[k]);
    }
    return slots_.index(digits);
}

StrategySpace::iterator::iterator(const StrategySpace* space, std::uint64_t index)
    : space_(space), index_(index) {
    if (index_ < space_->size()) current_ = space_->at(index_);
}

StrategySpace::iterator& StrategySpace::iterator::operator++() {
    ++index_;
    if (index_ < space_->size()) space_->at_into(index_, current_);
    return *this;
}

StrategySpace enumerate_strategies(const InfluenceDiagram& d, const Caps& caps) {
    return StrategySpace(d, caps);
}

}  // namespace riskrjt
