#pragma once

#include "lrvkit/spectral.hpp"
#include "lrvkit/time_series.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace lrvkit {

/// Search interval [lower, upper] for the Hurst parameter, 0 < lower < upper < 1.
struct HurstBounds {
    double lower = 0.05;
    double upper = 0.95;
};

void validate_bounds(const HurstBounds& bounds);

struct WhittleOptions {
    HurstBounds bounds;
    std::size_t grid_points = 512;
    double refine_tol = 1e-8;
};

struct WhittleFit {
    double h_hat = 0.5;
    double objective = 0.0;
    std::size_t m = 0;
    HurstBounds bounds;
    double normalized = 0.0;  // 2 sqrt(m) (h_hat - 1/2)
    std::size_t grid_points = 0;
    double refine_tol = 0.0;
    /// Objective range over the grid fell below 1e-12; h_hat is the lower bound.
    bool degenerate = false;
};

void write_record(std::ostream& out, const WhittleFit& fit);

/// nu_{l,m} = log l - (1/m) sum_{j=1}^m log j, l = 1..m.
class NuWeights {
public:
    explicit NuWeights(std::size_t m);

    [[nodiscard]] std::size_t m() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    /// (1/m) sum_l nu_{l,m}^2, which tends to 1.
    [[nodiscard]] double mean_square() const;
    [[nodiscard]] double max_abs() const;

private:
    std::vector<double> values_;
};

[[nodiscard]] NuWeights nu_weights(std::size_t m);

/// Local Whittle objective
///   L(H) = log((1/m) sum_l w_l^{2H-1} I(w_l)) - (2H-1) (1/m) sum_l log w_l.
/// Precomputes log w_l once so repeated evaluation costs m exponentials.
class WhittleObjective {
public:
    explicit WhittleObjective(const PeriodogramOrdinates& ordinates);

    [[nodiscard]] double operator()(double hurst) const;
    /// dL/dH. L is convex in H, so a sign change of the derivative brackets the minimizer.
    [[nodiscard]] double derivative(double hurst) const;
    [[nodiscard]] std::size_t m() const noexcept { return log_freq_.size(); }

private:
    std::vector<double> log_freq_;
    std::vector<double> ordinates_;
    double mean_log_freq_ = 0.0;
};

[[nodiscard]] double whittle_objective(const PeriodogramOrdinates& ordinates, double hurst);

/// Golden-section search for a minimizer of `f` on [a, b]; stops once the
/// bracket is narrower than `tol`.
[[nodiscard]] double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                             double tol);

/// Grid search over `options.grid_points` equally spaced H values followed
/// by golden-section refinement around the best grid point. Ties resolve to
/// the smallest H.
[[nodiscard]] WhittleFit fit_local_whittle(const PeriodogramOrdinates& ordinates, const WhittleOptions& options = {});
[[nodiscard]] WhittleFit fit_local_whittle(const TimeSeries& series, std::size_t m,
                                           const WhittleOptions& options = {});

/// (1/sqrt m) sum_l nu_{l,m} (I(w_l)/f0 - 1). Diagnostic; approximately N(0,1)
/// for short-memory input with the true f(0).
[[nodiscard]] double weighted_clt_statistic(const PeriodogramOrdinates& ordinates, double f0);
[[nodiscard]] double weighted_clt_statistic(const TimeSeries& series, std::size_t m, double f0);

}  // namespace lrvkit
