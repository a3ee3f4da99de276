#pragma once

#include "lrvkit/experiment_config.hpp"
#include "lrvkit/numeric.hpp"
#include "lrvkit/time_series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrvkit {

struct RunOptions {
    std::size_t threads = 1;
    /// Run the full size-table grid (and full_reps) instead of the anchor cells.
    bool full = false;
};

/// Number of replications an experiment runs under the given options.
[[nodiscard]] std::size_t effective_reps(const ExperimentConfig& config, const RunOptions& options);

/// Seed for replication `rep` at sample size n. Cells sharing n reuse the
/// same simulated paths.
[[nodiscard]] std::uint64_t replication_seed(const ExperimentConfig& config, std::size_t n, std::size_t rep);

inline constexpr const char* kSeedRule =
    "derive_seed(master_seed, stable_hash(experiment), n, rep) -> mt19937_64 via seed_seq";

/// X_t = r_t + delta 1{t > floor(n theta)}, t = 1..n.
[[nodiscard]] TimeSeries add_level_shift(const TimeSeries& series, double delta, double theta);

struct SampleCell {
    std::size_t n = 0;
    std::size_t m = 0;
    std::optional<double> m_exponent;
    std::optional<double> delta;  // level-shift design, density T^(R) only
    std::optional<double> theta;
    std::vector<double> samples;
    SampleSummary summary;
};

struct SampleExperiment {
    std::vector<SampleCell> cells;
    std::vector<std::string> warnings;
};

/// Standardized sqrt(m)(Q_n - f(0))/f(0) per replication and (n, m) cell.
[[nodiscard]] SampleExperiment run_clt_qn(const ExperimentConfig& config, const RunOptions& options = {});

/// 2 sqrt(m)(H_hat - 1/2) on raw simulated paths.
[[nodiscard]] SampleExperiment run_clt_whittle(const ExperimentConfig& config, const RunOptions& options = {});

/// Normalized LWE or T^(R) samples, depending on config.statistic.
[[nodiscard]] SampleExperiment run_density_samples(const ExperimentConfig& config, const RunOptions& options = {});

struct SizeCell {
    double delta = 0.0;
    double theta = 0.0;
    double m_exponent = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    double alpha = 0.0;
    std::size_t reps = 0;
    std::size_t rejections = 0;
    double reject_pct = 0.0;  // in [0, 100]
    double std_error = 0.0;   // 100 sqrt(p(1-p)/reps)
};

struct SizeTable {
    std::vector<SizeCell> cells;
    std::size_t reps = 0;
    bool full_grid = false;
};

[[nodiscard]] SizeTable run_size_table(const ExperimentConfig& config, const RunOptions& options = {});

/// Finds a cell by its table coordinates; nullptr if absent.
[[nodiscard]] const SizeCell* find_cell(const SizeTable& table, double delta, double theta, double m_exponent,
                                        std::size_t n, double alpha);

struct BiasRow {
    std::size_t n = 0;
    std::size_t m = 0;
    double ratio = 0.0;
    double f0 = 0.0;
    double exact_mean = 0.0;  // E Q_n from the true autocovariances
    double exact_bias = 0.0;
    double mc_mean = 0.0;
    double mc_std_error = 0.0;
    double mc_bias = 0.0;
};

struct BiasSlope {
    std::size_t n = 0;
    double exact = 0.0;  // NaN when some exact bias is zero
    double monte_carlo = 0.0;
};

struct BiasReport {
    std::vector<BiasRow> rows;
    std::vector<BiasSlope> slopes;
    std::size_t reps = 0;
};

/// E Q_n = (1/2pi) sum_{|h|<n} (1 - |h|/n) a_{n,h} gamma(h).
[[nodiscard]] double expected_smoothed_periodogram(const ProcessSpec& spec, std::size_t n, std::size_t m);

/// m = round(ratio n), at least 1.
[[nodiscard]] std::size_t bandwidth_for_ratio(std::size_t n, double ratio);

/// Exact and Monte Carlo bias of Q_n over the configured m/n ratios.
/// reps = 0 in the config is not allowed; the MC part uses effective_reps.
[[nodiscard]] BiasReport check_bias_rate(const ExperimentConfig& config, const RunOptions& options = {});

struct Histogram {
    std::vector<double> edges;    // bins + 1 values
    std::vector<double> density;  // integrates to 1
};

inline constexpr std::size_t kHistogramBins = 64;

/// Uniform bins over [min, max] of the samples.
[[nodiscard]] Histogram make_histogram(std::span<const double> samples, std::size_t bins = kHistogramBins);

}  // namespace lrvkit
