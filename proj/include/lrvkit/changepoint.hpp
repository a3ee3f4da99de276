#pragma once

#include "lrvkit/time_series.hpp"
#include "lrvkit/whittle.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lrvkit {

struct ChangePointResult {
    std::size_t n_hat = 0;              // 1-based, in [1, N-1]
    std::vector<double> cusum_values;   // |S_k - (k/N) S_N|, k = 1..N (index k-1)
    double max_value = 0.0;
};

/// First maximizer of the centered partial-sum process.
[[nodiscard]] ChangePointResult cusum_estimate(const TimeSeries& series);

/// Subtracts the sample mean of X_1..X_{n_hat} and of X_{n_hat+1}..X_N from
/// their respective segments.
[[nodiscard]] TimeSeries residualize(const TimeSeries& series, std::size_t n_hat);

struct LrdTestOutcome {
    std::size_t n_hat = 0;
    double h_hat_residual = 0.5;
    double statistic = 0.0;  // 2 sqrt(m) (h_hat_residual - 1/2)
    double p_value = 0.5;    // 1 - Phi(statistic)
    bool reject = false;
    double alpha = 0.05;
    std::size_t m = 0;
};

void write_record(std::ostream& out, const LrdTestOutcome& outcome);

/// Decision for a given statistic at level alpha (one-sided, upper tail).
[[nodiscard]] bool reject_at(double statistic, double alpha);

/// Test of a single change in mean against long-range dependence:
/// CUSUM break estimate, segment-demeaned residuals, local Whittle H on the
/// residuals, then reject when 2 sqrt(m)(H - 1/2) exceeds the normal (1 - alpha) quantile.
[[nodiscard]] LrdTestOutcome lrd_test(const TimeSeries& series, std::size_t m, double alpha,
                                      const WhittleOptions& options = {});

}  // namespace lrvkit
