#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace riskrjt {

enum class ExecutionPolicy { Serial, Parallel };

/// Scores one candidate index; NaN marks an infeasible candidate.
using ScoreFn = std::function<double(std::uint64_t)>;

/// Scores every index in [0, count). `make_worker` is called once per thread
/// so each thread owns its scratch state. The serial path is the reference;
/// the parallel path must produce the identical vector. `threads` <= 0 uses
/// the OpenMP default.
std::vector<double> sweep(std::uint64_t count, ExecutionPolicy policy,
                          const std::function<ScoreFn()>& make_worker, int threads = 0);

/// Relative tolerance when comparing objective values for ties.
inline constexpr double kTieTolerance = 1e-9;

struct Best {
    std::optional<std::uint64_t> index;
    double value = 0.0;
    /// Every index within the tie tolerance of the maximum, ascending.
    std::vector<std::uint64_t> ties;
};

/// Smallest index whose score is within kTieTolerance * max(1, |max|) of the
/// maximum. NaN scores are skipped; all-NaN gives an empty result.
Best select_best(std::span<const double> scores);

int max_threads();

}  // namespace riskrjt
