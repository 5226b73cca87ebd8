#pragma once

#include "riskrjt/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace riskrjt {

/// Mixed-radix bijection between state tuples over a scope of nodes and flat
/// indices in [0, total). The first node of the scope is the most significant
/// digit; the last one varies fastest.
class ConfigIndexer {
public:
    ConfigIndexer() = default;
    ConfigIndexer(std::vector<NodeId> scope, std::vector<std::size_t> radices);
    explicit ConfigIndexer(std::vector<std::size_t> radices);

    std::span<const NodeId> scope() const noexcept { return scope_; }
    std::span<const std::size_t> radices() const noexcept { return radices_; }
    std::span<const std::uint64_t> strides() const noexcept { return strides_; }
    std::size_t size() const noexcept { return radices_.size(); }
    std::uint64_t total() const noexcept { return total_; }

    /// Throws std::out_of_range when the tuple length or any digit is invalid.
    std::uint64_t index(std::span<const int> states) const;
    std::vector<int> decode(std::uint64_t index) const;
    void decode_into(std::uint64_t index, std::span<int> out) const;

    /// Digit at `position` of a flat index, without decoding the whole tuple.
    int digit(std::uint64_t index, std::size_t position) const noexcept {
        return static_cast<int>((index / strides_[position]) % radices_[position]);
    }

private:
    void init();

    std::vector<NodeId> scope_;
    std::vector<std::size_t> radices_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t total_ = 1;
};

}  // namespace riskrjt
