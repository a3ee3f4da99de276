#include "lrvkit/spectral.hpp"

#include "fft.hpp"
#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace lrvkit {

namespace {

// cos/sin(2 pi k / n) for k = 0..n-1. Indexing by (t * j) mod n keeps every
// angle reduced exactly, which direct evaluation of cos(t * w_j) does not.
struct UnitCircleTable {
    explicit UnitCircleTable(std::size_t n) : cos_(n), sin_(n) {
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            cos_[k] = std::cos(angle);
            sin_[k] = std::sin(angle);
        }
    }
    std::vector<double> cos_;
    std::vector<double> sin_;
};

std::size_t residue(long long a, std::size_t n) {
    const long long r = a % static_cast<long long>(n);
    return static_cast<std::size_t>(r < 0 ? r + static_cast<long long>(n) : r);
}

bool needs_compensation(std::size_t n) { return n > kCompensatedSumThreshold; }

// |sum_{t=1}^n y_t e^{-i t w_j}|^2 / (2 pi n) by direct summation.
double direct_ordinate(std::span<const double> y, long j, const UnitCircleTable& table) {
    const std::size_t n = y.size();
    CompensatedSum re_c, im_c;
    double re = 0.0, im = 0.0;
    const bool compensated = needs_compensation(n);
    for (std::size_t t = 1; t <= n; ++t) {
        const std::size_t k = residue(static_cast<long long>(t) * j, n);
        const double yr = y[t - 1] * table.cos_[k];
        const double yi = -y[t - 1] * table.sin_[k];
        if (compensated) {
            re_c.add(yr);
            im_c.add(yi);
        } else {
            re += yr;
            im += yi;
        }
    }
    if (compensated) {
        re = re_c.value();
        im = im_c.value();
    }
    return (re * re + im * im) / (kTwoPi * static_cast<double>(n));
}

// Ordinates at j != 0 (mod n) do not depend on the mean; centering first
// keeps them accurate when the level dwarfs the fluctuations.
std::vector<double> centered_values(const TimeSeries& series) {
    const TimeSeries centered = series.is_demeaned() ? series : series.demeaned();
    return {centered.values().begin(), centered.values().end()};
}

void require_length(const TimeSeries& series) {
    if (series.size() < 2) throw Error(ErrorCode::InvalidLength, "series needs at least 2 observations");
}

}  // namespace

std::string_view to_string(SpectralPath path) noexcept {
    return path == SpectralPath::FrequencyAverage ? "FrequencyAverage" : "AutocovarianceWeights";
}

SpectralPath parse_spectral_path(std::string_view text) {
    if (text == "FrequencyAverage" || text == "freq" || text == "frequency") return SpectralPath::FrequencyAverage;
    if (text == "AutocovarianceWeights" || text == "acov" || text == "autocovariance") {
        return SpectralPath::AutocovarianceWeights;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown spectral path '" + std::string(text) + "'");
}

void write_record(std::ostream& out, const SpectralEstimate& est) {
    const auto old_precision = out.precision(17);
    out << "n=" << est.n << '\n'
        << "m=" << est.m << '\n'
        << "q_n=" << est.q_n << '\n'
        << "f0_hat=" << est.f0_hat << '\n'
        << "lrv_hat=" << est.lrv_hat << '\n'
        << "path=" << to_string(est.path) << '\n';
    out.precision(old_precision);
}

std::size_t max_bandwidth(std::size_t n) noexcept { return n >= 1 ? (n - 1) / 2 : 0; }

void validate_bandwidth(std::size_t n, std::size_t m) {
    if (n < 2) throw Error(ErrorCode::InvalidLength, "n must be at least 2, got " + std::to_string(n));
    if (m < 1 || m > max_bandwidth(n)) {
        throw Error(ErrorCode::BandwidthOutOfRange, "m=" + std::to_string(m) + " outside [1, " +
                                                        std::to_string(max_bandwidth(n)) + "] for n=" +
                                                        std::to_string(n));
    }
}

std::vector<double> fourier_frequencies(std::size_t n, std::size_t m) {
    validate_bandwidth(n, m);
    std::vector<double> w(m);
    for (std::size_t j = 1; j <= m; ++j) w[j - 1] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    return w;
}

PeriodogramOrdinates periodogram(const TimeSeries& series, std::size_t m, DftMethod method) {
    const std::size_t n = series.size();
    validate_bandwidth(n, m);
    const auto y = centered_values(series);

    PeriodogramOrdinates out;
    out.n = n;
    out.frequencies = fourier_frequencies(n, m);
    out.indices.resize(m);
    out.ordinates.resize(m);
    for (std::size_t j = 1; j <= m; ++j) out.indices[j - 1] = static_cast<long>(j);

    const bool use_fft = method == DftMethod::Fft || (method == DftMethod::Auto && m > kDirectDftMaxBandwidth);
    if (use_fft) {
        const auto spectrum = detail::real_fft(y);
        const double scale = kTwoPi * static_cast<double>(n);
        for (std::size_t j = 1; j <= m; ++j) out.ordinates[j - 1] = std::norm(spectrum[j]) / scale;
    } else {
        const UnitCircleTable table(n);
        for (std::size_t j = 1; j <= m; ++j) {
            out.ordinates[j - 1] = direct_ordinate(y, static_cast<long>(j), table);
        }
    }
    return out;
}

PeriodogramOrdinates full_periodogram(const TimeSeries& series) {
    require_length(series);
    const std::size_t n = series.size();
    const auto y = centered_values(series);
    const UnitCircleTable table(n);
    const long lo = -static_cast<long>((n - 1) / 2);
    const long hi = static_cast<long>(n / 2);

    PeriodogramOrdinates out;
    out.n = n;
    for (long j = lo; j <= hi; ++j) {
        double ordinate = 0.0;
        if (j == 0) {
            const double s = accurate_sum(series.values());
            ordinate = s * s / (kTwoPi * static_cast<double>(n));
        } else {
            ordinate = direct_ordinate(y, j, table);
        }
        out.indices.push_back(j);
        out.frequencies.push_back(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        out.ordinates.push_back(ordinate);
    }
    return out;
}

double sample_autocovariance(const TimeSeries& series, long h) {
    const std::size_t n = series.size();
    if (n == 0) throw Error(ErrorCode::InvalidLength, "empty series");
    const std::size_t lag = static_cast<std::size_t>(h < 0 ? -h : h);
    if (lag >= n) {
        throw Error(ErrorCode::LagOutOfRange, "|h|=" + std::to_string(lag) + " must be < n=" + std::to_string(n));
    }
    const auto x = series.values();
    CompensatedSum acc;
    double plain = 0.0;
    const bool compensated = needs_compensation(n - lag);
    for (std::size_t j = 0; j + lag < n; ++j) {
        if (compensated) {
            acc.add(x[j + lag] * x[j]);
        } else {
            plain += x[j + lag] * x[j];
        }
    }
    return (compensated ? acc.value() : plain) / static_cast<double>(n);
}

std::vector<double> sample_autocovariances(const TimeSeries& series, std::size_t max_lag) {
    if (max_lag >= series.size()) {
        throw Error(ErrorCode::LagOutOfRange, "max lag must be below the series length");
    }
    std::vector<double> out(max_lag + 1);
    for (std::size_t h = 0; h <= max_lag; ++h) out[h] = sample_autocovariance(series, static_cast<long>(h));
    return out;
}

CosineWeights::CosineWeights(std::size_t n, std::size_t m) : n_(n), m_(m), weights_(n) {
    validate_bandwidth(n, m);
    const UnitCircleTable table(n);
    for (std::size_t t = 0; t < n; ++t) {
        double s = 0.0;
        for (std::size_t j = 1; j <= m; ++j) s += table.cos_[(t * j) % n];
        weights_[t] = s / static_cast<double>(m);
    }
}

double CosineWeights::at(long t) const {
    const std::size_t lag = static_cast<std::size_t>(t < 0 ? -t : t);
    if (lag >= n_) throw Error(ErrorCode::LagOutOfRange, "cosine weight lag outside (-n, n)");
    return weights_[lag];
}

CosineWeights cosine_weights(std::size_t n, std::size_t m) { return CosineWeights(n, m); }

SpectralEstimate lrv_smoothed_periodogram(const TimeSeries& series, std::size_t m, SpectralPath path) {
    const std::size_t n = series.size();
    validate_bandwidth(n, m);

    SpectralEstimate est;
    est.n = n;
    est.m = m;
    est.path = path;

    if (path == SpectralPath::FrequencyAverage) {
        const auto pg = periodogram(series, m);
        est.q_n = accurate_sum(pg.ordinates) / static_cast<double>(m);
    } else {
        const TimeSeries centered = series.is_demeaned() ? series : series.demeaned();
        const CosineWeights weights(n, m);
        const auto gamma = sample_autocovariances(centered, n - 1);
        CompensatedSum acc;
        acc.add(gamma[0]);
        for (std::size_t h = 1; h < n; ++h) acc.add(2.0 * weights.nonnegative_lags()[h] * gamma[h]);
        // Exact arithmetic gives a nonnegative average of ordinates; clip rounding below zero.
        est.q_n = std::max(0.0, acc.value() / kTwoPi);
    }
    est.f0_hat = est.q_n;
    est.lrv_hat = kTwoPi * est.q_n;
    return est;
}

double bartlett_window(double x) noexcept {
    const double a = std::abs(x);
    return a <= 1.0 ? 1.0 - a : 0.0;
}

std::size_t default_lag_window_bandwidth(std::size_t n) {
    std::size_t l = static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(n)) + 1e-9));
    return l < 1 ? 1 : l;
}

double lrv_lag_window(const TimeSeries& series, const LagWindow& window, std::size_t bandwidth) {
    const std::size_t n = series.size();
    require_length(series);
    if (bandwidth < 1 || bandwidth >= n) {
        throw Error(ErrorCode::BandwidthOutOfRange, "lag-window bandwidth must satisfy 1 <= l < n");
    }
    if (std::abs(window(0.0) - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "lag window must satisfy w(0) = 1");
    }
    const TimeSeries centered = series.is_demeaned() ? series : series.demeaned();
    const double l = static_cast<double>(bandwidth);
    double s = sample_autocovariance(centered, 0);
    for (std::size_t r = 1; r <= bandwidth; ++r) {
        const double w = window(static_cast<double>(r) / l);
        if (w != 0.0) s += 2.0 * w * sample_autocovariance(centered, static_cast<long>(r));
    }
    return s / kTwoPi;
}

}  // namespace lrvkit
