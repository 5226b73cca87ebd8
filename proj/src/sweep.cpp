#include "riskrjt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <omp.h>

namespace riskrjt {

std::vector<double> sweep(std::uint64_t count, ExecutionPolicy policy,
                          const std::function<ScoreFn()>& make_worker, int threads) {
    std::vector<double> scores(count, std::nan(""));
    if (count == 0) return scores;

    if (policy == ExecutionPolicy::Serial) {
        ScoreFn score = make_worker();
        for (std::uint64_t i = 0; i < count; ++i) scores[i] = score(i);
        return scores;
    }

    std::exception_ptr failure;
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel num_threads(nthreads)
    {
        ScoreFn score;
        try {
            score = make_worker();
        } catch (...) {
#pragma omp critical(riskrjt_sweep_error)
            if (!failure) failure = std::current_exception();
        }
#pragma omp for schedule(dynamic, 4)
        for (std::int64_t i = 0; i < n; ++i) {
            if (!score) continue;
            try {
                scores[static_cast<std::size_t>(i)] = score(static_cast<std::uint64_t>(i));
            } catch (...) {
#pragma omp critical(riskrjt_sweep_error)
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return scores;
}

Best select_best(std::span<const double> scores) {
    Best best;
    double max = -INFINITY;
    bool any = false;
    for (double s : scores) {
        if (std::isnan(s)) continue;
        max = std::max(max, s);
        any = true;
    }
    if (!any) return best;
    const double cut = max - kTieTolerance * std::max(1.0, std::abs(max));
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isnan(scores[i]) && scores[i] >= cut) best.ties.push_back(i);
    }
    best.index = best.ties.front();
    best.value = scores[*best.index];
    return best;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace riskrjt
