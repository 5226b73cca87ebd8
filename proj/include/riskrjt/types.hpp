#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace riskrjt {

/// Index of a node inside one InfluenceDiagram. Stable across serialization
/// because nodes are written and read back in declaration order.
struct NodeId {
    std::uint32_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint32_t v) : value(v) {}
    constexpr explicit NodeId(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

    constexpr std::size_t index() const noexcept { return value; }
    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Enumeration limits. Every exhaustive routine checks its size against one
/// of these before allocating or looping.
struct Caps {
    std::uint64_t joint_states = std::uint64_t{1} << 26;
    std::uint64_t strategies = std::uint64_t{1} << 24;
    std::uint64_t merged_states = std::uint64_t{1} << 24;
    std::uint64_t cluster_states = std::uint64_t{1} << 24;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an enumeration or table would exceed its configured cap.
class CapExceeded : public Error {
public:
    CapExceeded(const std::string& what, std::uint64_t size, std::uint64_t cap)
        : Error(what + ": size " + (size == UINT64_MAX ? std::string("overflows 64 bits")
                                                       : std::to_string(size)) +
                " exceeds cap " + std::to_string(cap)),
          size_(size),
          cap_(cap) {}

    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t size_;
    std::uint64_t cap_;
};

/// Multiplies two sizes, saturating at UINT64_MAX.
constexpr std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

}  // namespace riskrjt

template <>
struct std::hash<riskrjt::NodeId> {
    std::size_t operator()(const riskrjt::NodeId& id) const noexcept {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
