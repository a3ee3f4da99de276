#pragma once

#include "lrvkit/time_series.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace lrvkit {

/// Periodogram ordinates I_n(w_j) at a set of Fourier frequencies w_j = 2 pi j / n.
struct PeriodogramOrdinates {
    std::size_t n = 0;
    std::vector<long> indices;        // j
    std::vector<double> frequencies;  // w_j, radians
    std::vector<double> ordinates;    // I_n(w_j) >= 0

    [[nodiscard]] std::size_t size() const noexcept { return ordinates.size(); }
};

enum class SpectralPath { FrequencyAverage, AutocovarianceWeights };

[[nodiscard]] std::string_view to_string(SpectralPath path) noexcept;
[[nodiscard]] SpectralPath parse_spectral_path(std::string_view text);

/// Smoothed-periodogram estimate of the spectral density at zero.
struct SpectralEstimate {
    double q_n = 0.0;
    double f0_hat = 0.0;   // == q_n
    double lrv_hat = 0.0;  // == 2 pi q_n
    std::size_t n = 0;
    std::size_t m = 0;
    SpectralPath path = SpectralPath::FrequencyAverage;
};

/// Writes `key=value` lines for n, m, q_n, f0_hat, lrv_hat, path.
void write_record(std::ostream& out, const SpectralEstimate& est);

/// Lag-indexed weights a_{n,t} = (1/m) sum_{j=1}^m cos(t w_j), |t| < n.
class CosineWeights {
public:
    CosineWeights(std::size_t n, std::size_t m);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    /// a_{n,t} for t in [-(n-1), n-1].
    [[nodiscard]] double at(long t) const;
    /// a_{n,0}, ..., a_{n,n-1}.
    [[nodiscard]] std::span<const double> nonnegative_lags() const noexcept { return weights_; }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> weights_;
};

/// Largest admissible bandwidth, floor((n-1)/2).
[[nodiscard]] std::size_t max_bandwidth(std::size_t n) noexcept;

/// Throws InvalidLength / BandwidthOutOfRange unless n >= 2 and 1 <= m <= floor((n-1)/2).
void validate_bandwidth(std::size_t n, std::size_t m);

[[nodiscard]] std::vector<double> fourier_frequencies(std::size_t n, std::size_t m);

/// Bandwidths at or below this use direct O(nm) summation; larger ones a full FFT.
inline constexpr std::size_t kDirectDftMaxBandwidth = 64;

enum class DftMethod { Auto, Direct, Fft };

/// I_n(w_j) for j = 1..m.
[[nodiscard]] PeriodogramOrdinates periodogram(const TimeSeries& series, std::size_t m,
                                               DftMethod method = DftMethod::Auto);

/// I_n(w_j) for every j in {-floor((n-1)/2), ..., floor(n/2)}.
[[nodiscard]] PeriodogramOrdinates full_periodogram(const TimeSeries& series);

/// gamma_hat(h) = (1/n) sum_{j=1}^{n-|h|} X_{j+|h|} X_j. No demeaning.
[[nodiscard]] double sample_autocovariance(const TimeSeries& series, long h);

/// gamma_hat(0..max_lag), O(n * max_lag).
[[nodiscard]] std::vector<double> sample_autocovariances(const TimeSeries& series, std::size_t max_lag);

[[nodiscard]] CosineWeights cosine_weights(std::size_t n, std::size_t m);

/// Q_n = (1/m) sum_{j=1}^m I_n(w_j). Demeans first unless the series is flagged demeaned.
/// The AutocovarianceWeights path evaluates (1/2pi) sum_{|h|<n} a_{n,h} gamma_hat(h) in O(n^2).
[[nodiscard]] SpectralEstimate lrv_smoothed_periodogram(const TimeSeries& series, std::size_t m,
                                                        SpectralPath path = SpectralPath::FrequencyAverage);

using LagWindow = std::function<double(double)>;

/// w(x) = 1 - |x| on [-1, 1].
[[nodiscard]] double bartlett_window(double x) noexcept;

/// f_hat(0) = (1/2pi) sum_{|r| <= l} w(r/l) gamma_hat(r). Demeans unless flagged.
[[nodiscard]] double lrv_lag_window(const TimeSeries& series, const LagWindow& window, std::size_t bandwidth);

/// Default lag-window bandwidth floor(n^{1/3}).
[[nodiscard]] std::size_t default_lag_window_bandwidth(std::size_t n);

}  // namespace lrvkit
