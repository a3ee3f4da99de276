#include "lrvkit/numeric.hpp"

#include "lrvkit/error.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <limits>

namespace lrvkit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidLength: return "InvalidLength";
        case ErrorCode::BandwidthOutOfRange: return "BandwidthOutOfRange";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::LagOutOfRange: return "LagOutOfRange";
        case ErrorCode::InvalidBandwidth: return "InvalidBandwidth";
        case ErrorCode::InvalidBounds: return "InvalidBounds";
        case ErrorCode::DegenerateOrdinates: return "DegenerateOrdinates";
        case ErrorCode::InvalidF0: return "InvalidF0";
        case ErrorCode::BreakOutOfRange: return "BreakOutOfRange";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InsufficientReps: return "InsufficientReps";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

double accurate_sum(std::span<const double> xs) noexcept {
    if (xs.size() <= kCompensatedSumThreshold) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw Error(ErrorCode::InvalidLength, "mean of empty sequence");
    return accurate_sum(xs) / static_cast<double>(xs.size());
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_upper_tail(double x) noexcept { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "normal quantile requires p in (0,1)");
    }
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, p);
}

long bandwidth_from_exponent(long n, double beta) {
    if (n < 1) throw Error(ErrorCode::InvalidLength, "bandwidth rule needs n >= 1");
    if (!(beta > 0.0 && beta < 1.0)) {
        throw Error(ErrorCode::InvalidBandwidth, "bandwidth exponent must lie in (0,1)");
    }
    const double raw = std::pow(static_cast<double>(n), beta);
    return static_cast<long>(std::floor(raw + 1e-9 * std::max(1.0, raw)));
}

double ks_distance_to_normal(std::span<const double> samples) {
    if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

MeanEstimate mean_with_std_error(std::span<const double> samples) {
    MeanEstimate out;
    out.mean = mean(samples);
    if (samples.size() < 2) return out;
    CompensatedSum ss;
    for (double x : samples) ss.add((x - out.mean) * (x - out.mean));
    const double n = static_cast<double>(samples.size());
    out.std_error = std::sqrt(ss.value() / (n - 1.0) / n);
    return out;
}

SampleSummary summarize(std::span<const double> samples) {
    SampleSummary s;
    s.count = samples.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (samples.empty()) {
        s.mean = s.variance = s.skewness = s.ks_distance = nan;
        return s;
    }
    s.mean = mean(samples);
    CompensatedSum m2, m3;
    for (double x : samples) {
        const double d = x - s.mean;
        m2.add(d * d);
        m3.add(d * d * d);
    }
    const double n = static_cast<double>(s.count);
    s.variance_defined = s.count >= 2;
    s.variance = s.variance_defined ? m2.value() / (n - 1.0) : nan;
    const double pop_var = m2.value() / n;
    s.skewness = (s.count >= 3 && pop_var > 0.0) ? (m3.value() / n) / std::pow(pop_var, 1.5) : nan;
    s.ks_distance = ks_distance_to_normal(samples);
    return s;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "slope needs two or more paired points");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "slope undefined for constant x");
    return sxy / sxx;
}

}  // namespace lrvkit
