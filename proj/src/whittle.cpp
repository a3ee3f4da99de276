#include "lrvkit/whittle.hpp"

#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace lrvkit {

void validate_bounds(const HurstBounds& b) {
    if (!(b.lower > 0.0 && b.lower < b.upper && b.upper < 1.0)) {
        throw Error(ErrorCode::InvalidBounds, "Hurst bounds must satisfy 0 < lower < upper < 1");
    }
}

void write_record(std::ostream& out, const WhittleFit& fit) {
    const auto old_precision = out.precision(17);
    out << "h_hat=" << fit.h_hat << '\n'
        << "objective=" << fit.objective << '\n'
        << "m=" << fit.m << '\n'
        << "lower=" << fit.bounds.lower << '\n'
        << "upper=" << fit.bounds.upper << '\n'
        << "normalized=" << fit.normalized << '\n'
        << "grid_points=" << fit.grid_points << '\n'
        << "refine_tol=" << fit.refine_tol << '\n'
        << "degenerate=" << (fit.degenerate ? "true" : "false") << '\n';
    out.precision(old_precision);
}

NuWeights::NuWeights(std::size_t m) : values_(m) {
    if (m < 1) throw Error(ErrorCode::InvalidBandwidth, "nu weights need m >= 1");
    // Centre in extended precision; a double mean alone leaves a residual near m * ulp(log m).
    long double centre = 0.0L;
    for (std::size_t l = 1; l <= m; ++l) centre += std::log(static_cast<long double>(l));
    centre /= static_cast<long double>(m);
    for (std::size_t l = 1; l <= m; ++l) {
        values_[l - 1] = static_cast<double>(std::log(static_cast<long double>(l)) - centre);
    }
}

double NuWeights::mean_square() const {
    CompensatedSum acc;
    for (double v : values_) acc.add(v * v);
    return acc.value() / static_cast<double>(values_.size());
}

double NuWeights::max_abs() const {
    double best = 0.0;
    for (double v : values_) best = std::max(best, std::abs(v));
    return best;
}

NuWeights nu_weights(std::size_t m) { return NuWeights(m); }

WhittleObjective::WhittleObjective(const PeriodogramOrdinates& ordinates)
    : ordinates_(ordinates.ordinates) {
    if (ordinates_.empty() || ordinates.frequencies.size() != ordinates_.size()) {
        throw Error(ErrorCode::DegenerateOrdinates, "objective needs a nonempty, consistent set of ordinates");
    }
    bool any_positive = false;
    for (double v : ordinates_) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::DegenerateOrdinates, "ordinates must be finite and >= 0");
        any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) throw Error(ErrorCode::DegenerateOrdinates, "all periodogram ordinates are zero");

    log_freq_.reserve(ordinates_.size());
    for (double w : ordinates.frequencies) {
        if (!(w > 0.0)) throw Error(ErrorCode::DegenerateOrdinates, "frequencies must be positive");
        log_freq_.push_back(std::log(w));
    }
    mean_log_freq_ = mean(log_freq_);
}

double WhittleObjective::operator()(double hurst) const {
    if (!(hurst > 0.0 && hurst < 1.0)) throw Error(ErrorCode::InvalidArgument, "H must lie in (0,1)");
    const double exponent = 2.0 * hurst - 1.0;
    double s = 0.0;
    for (std::size_t l = 0; l < ordinates_.size(); ++l) s += std::exp(exponent * log_freq_[l]) * ordinates_[l];
    return std::log(s / static_cast<double>(ordinates_.size())) - exponent * mean_log_freq_;
}

double WhittleObjective::derivative(double hurst) const {
    if (!(hurst > 0.0 && hurst < 1.0)) throw Error(ErrorCode::InvalidArgument, "H must lie in (0,1)");
    const double exponent = 2.0 * hurst - 1.0;
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < ordinates_.size(); ++l) {
        const double w = std::exp(exponent * log_freq_[l]) * ordinates_[l];
        num += (log_freq_[l] - mean_log_freq_) * w;
        den += w;
    }
    return 2.0 * num / den;
}

double whittle_objective(const PeriodogramOrdinates& ordinates, double hurst) {
    return WhittleObjective(ordinates)(hurst);
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(a <= b)) throw Error(ErrorCode::InvalidArgument, "golden section needs a <= b");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

WhittleFit fit_local_whittle(const PeriodogramOrdinates& ordinates, const WhittleOptions& options) {
    validate_bounds(options.bounds);
    if (options.grid_points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
    if (!(options.refine_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "refine_tol must be positive");

    const WhittleObjective objective(ordinates);
    const auto& [lo, hi] = options.bounds;
    const std::size_t g = options.grid_points;
    const double step = (hi - lo) / static_cast<double>(g - 1);
    auto grid_at = [&](std::size_t i) { return i + 1 == g ? hi : lo + static_cast<double>(i) * step; };

    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    double worst_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g; ++i) {
        const double v = objective(grid_at(i));
        if (v < best_value) {
            best_value = v;
            best = i;
        }
        worst_value = std::max(worst_value, v);
    }

    WhittleFit fit;
    fit.m = objective.m();
    fit.bounds = options.bounds;
    fit.grid_points = g;
    fit.refine_tol = options.refine_tol;
    fit.degenerate = worst_value - best_value < 1e-12;

    double h = grid_at(best);
    double value = best_value;
    if (fit.degenerate) {
        h = lo;
        value = objective(lo);
    } else {
        const double a = grid_at(best == 0 ? 0 : best - 1);
        const double b = grid_at(std::min(best + 1, g - 1));
        const double refined = golden_section_minimize([&](double x) { return objective(x); }, a, b,
                                                       options.refine_tol);
        const double refined_value = objective(refined);
        if (refined_value < value) {
            h = refined;
            value = refined_value;
        }
        // The objective is flat to rounding within ~1e-8 of its minimum, so the
        // golden-section point is polished by bisecting the derivative, which
        // is well conditioned there.
        double left = a, right = b;
        if (objective.derivative(left) < 0.0 && objective.derivative(right) > 0.0) {
            for (int it = 0; it < 200 && right - left > 1e-15; ++it) {
                const double mid = 0.5 * (left + right);
                (objective.derivative(mid) > 0.0 ? right : left) = mid;
            }
            const double polished = 0.5 * (left + right);
            const double polished_value = objective(polished);
            if (polished_value <= value + 1e-13 * (1.0 + std::abs(value))) {
                h = polished;
                value = polished_value;
            }
        }
    }
    fit.h_hat = h;
    fit.objective = value;
    fit.normalized = 2.0 * std::sqrt(static_cast<double>(fit.m)) * (h - 0.5);
    return fit;
}

WhittleFit fit_local_whittle(const TimeSeries& series, std::size_t m, const WhittleOptions& options) {
    validate_bounds(options.bounds);
    return fit_local_whittle(periodogram(series, m), options);
}

double weighted_clt_statistic(const PeriodogramOrdinates& ordinates, double f0) {
    if (!(f0 > 0.0) || !std::isfinite(f0)) throw Error(ErrorCode::InvalidF0, "f0 must be positive and finite");
    const std::size_t m = ordinates.size();
    const NuWeights nu(m);
    CompensatedSum acc;
    for (std::size_t l = 0; l < m; ++l) acc.add(nu.values()[l] * (ordinates.ordinates[l] / f0 - 1.0));
    return acc.value() / std::sqrt(static_cast<double>(m));
}

double weighted_clt_statistic(const TimeSeries& series, std::size_t m, double f0) {
    if (!(f0 > 0.0) || !std::isfinite(f0)) throw Error(ErrorCode::InvalidF0, "f0 must be positive and finite");
    return weighted_clt_statistic(periodogram(series, m), f0);
}

}  // namespace lrvkit
