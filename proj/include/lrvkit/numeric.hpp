#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lrvkit {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Sums longer than this use Neumaier-compensated accumulation.
inline constexpr std::size_t kCompensatedSumThreshold = 10'000;

/// Neumaier (improved Kahan) compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sum of a sequence, compensated when longer than kCompensatedSumThreshold.
[[nodiscard]] double accurate_sum(std::span<const double> xs) noexcept;

[[nodiscard]] double mean(std::span<const double> xs);

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x), computed without cancellation.
[[nodiscard]] double normal_upper_tail(double x) noexcept;

/// Standard normal quantile, p in (0, 1).
[[nodiscard]] double normal_quantile(double p);

/// floor(n^beta), robust to pow() landing just below an exact integer.
[[nodiscard]] long bandwidth_from_exponent(long n, double beta);

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; NaN when count < 2
    double skewness = 0.0;  // NaN when count < 3 or variance is zero
    double ks_distance = 0.0;  // Kolmogorov-Smirnov distance to N(0,1)
    bool variance_defined = false;
};

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(count); 0 when count < 2
};

[[nodiscard]] MeanEstimate mean_with_std_error(std::span<const double> samples);

[[nodiscard]] SampleSummary summarize(std::span<const double> samples);

/// sup_x |F_n(x) - Phi(x)|.
[[nodiscard]] double ks_distance_to_normal(std::span<const double> samples);

/// Ordinary least squares slope of y on x.
[[nodiscard]] double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lrvkit
