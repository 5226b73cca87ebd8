#pragma once

#include "riskrjt/strategy.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace riskrjt {

enum class SolveStatus { Optimal, Infeasible, Unknown };

std::string_view to_string(SolveStatus s) noexcept;

/// Variable assignment indexed by VarId, as produced by a backend.
struct Solution {
    SolveStatus status = SolveStatus::Unknown;
    std::vector<double> values;
    double objective = 0.0;
    /// "reference" or "external:<command>".
    std::string source;
    std::vector<std::string> diagnostics;

    /// Reference backend only: enumeration indices of all optimal strategies.
    std::vector<std::uint64_t> argmax;
};

}  // namespace riskrjt
