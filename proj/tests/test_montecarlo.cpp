#include "lrvkit/montecarlo.hpp"

#include "lrvkit/changepoint.hpp"
#include "lrvkit/report.hpp"
#include "lrvkit/spectral.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <sstream>

using namespace lrvkit;
using namespace lrvkit::testing;

namespace {

ExperimentConfig base_config(ExperimentKind kind, ProcessSpec spec, std::size_t n, std::vector<double> betas,
                             std::size_t reps) {
    ExperimentConfig c;
    c.name = "unit";
    c.kind = kind;
    c.process = std::move(spec);
    c.n_values = {n};
    c.m_exponents = std::move(betas);
    c.reps = reps;
    c.master_seed = 11;
    return c;
}

ExperimentConfig size_config(std::size_t reps) {
    auto c = base_config(ExperimentKind::SizeTable, ProcessSpec::garch11(0.5, 0.2, 0.4), 300, {0.6, 0.7}, reps);
    c.size_params = SizeParams{{0.3, 1.0}, {0.25, 0.5}, {0.01, 0.05, 0.10}};
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// E I_n(w_j) = (1/(2 pi n)) sum_{s,t} gamma(s - t) cos((s - t) w_j), averaged over j.
double expected_q_by_double_sum(const ProcessSpec& spec, std::size_t n, std::size_t m) {
    double total = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
        const double w = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const long h = static_cast<long>(a) - static_cast<long>(b);
                const double g = theoretical_autocovariance(spec, h);
                if (g != 0.0) s += g * std::cos(static_cast<double>(h) * w);
            }
        }
        total += s / (kTwoPi * static_cast<double>(n));
    }
    return total / static_cast<double>(m);
}

}  // namespace

TEST(CltQn, SingleReplicationFlagsUndefinedVariance) {
    const auto r = run_clt_qn(base_config(ExperimentKind::CltQn, ProcessSpec::iid(1.0), 1000, {0.7}, 1));
    ASSERT_EQ(r.cells.size(), 1u);
    EXPECT_EQ(r.cells[0].samples.size(), 1u);
    EXPECT_FALSE(r.cells[0].summary.variance_defined);
    EXPECT_TRUE(std::isnan(r.cells[0].summary.variance));
}

TEST(CltQn, SamplesMatchEstimatorOnSameSeed) {
    const auto cfg = base_config(ExperimentKind::CltQn, ProcessSpec::garch11(0.5, 0.2, 0.4), 2000, {0.6, 0.7}, 3);
    const auto r = run_clt_qn(cfg);
    const double f0 = theoretical_f0(cfg.process);
    ASSERT_EQ(r.cells.size(), 2u);
    for (const auto& cell : r.cells) {
        for (std::size_t rep = 0; rep < 3; ++rep) {
            const auto x = simulate(cfg.process, 2000, replication_seed(cfg, 2000, rep));
            const double q = lrv_smoothed_periodogram(x, cell.m).q_n;
            EXPECT_NEAR(cell.samples[rep], std::sqrt(static_cast<double>(cell.m)) * (q - f0) / f0, 1e-10);
        }
    }
}

TEST(CltQn, IndependentOfThreadCount) {
    const auto cfg = base_config(ExperimentKind::CltQn, ProcessSpec::iid(1.0), 1000, {0.6, 0.7}, 40);
    const auto a = run_clt_qn(cfg, {1, false});
    const auto b = run_clt_qn(cfg, {4, false});
    for (std::size_t k = 0; k < a.cells.size(); ++k) EXPECT_EQ(a.cells[k].samples, b.cells[k].samples);
}

TEST(CltQn, BiasStaysControlledTowardUpperExponent) {
    const auto r = run_clt_qn(base_config(ExperimentKind::CltQn, ProcessSpec::garch11(0.5, 0.2, 0.4), 10000,
                                          {0.6, 0.7, 0.75, 0.79}, 300));
    for (const auto& c : r.cells) EXPECT_LT(std::abs(c.summary.mean), 0.25) << "m=" << c.m;
}

// Finite-sample variance of the standardized Q_n for Gaussian GARCH(1,1):
// 1 + (m/n) * avg_{j,k}[C(0) + C(w_j + w_k) + C(w_j - w_k) - 2 c(0)] / sigma^4,
// where c(h) = cum(X_0, X_0, X_h, X_h) and C is its cosine transform.
double garch_clt_variance(double a0, double a1, double b1, std::size_t n, std::size_t m) {
    const double s2 = a0 / (1 - a1 - b1);
    const double p = a1 + b1;
    const double kurt = 3 * (1 - p * p) / (1 - p * p - 2 * a1 * a1);
    const double var_sq = (kurt - 1) * s2 * s2;
    const double rho1 = a1 * (1 - a1 * b1 - b1 * b1) / (1 - 2 * a1 * b1 - b1 * b1);
    const double c0 = var_sq - 2 * s2 * s2;
    auto transform = [&](double lambda) {
        const double c = std::cos(lambda);
        return c0 + 2 * var_sq * rho1 * (c - p) / (1 - 2 * p * c + p * p);
    };
    const double c_zero = transform(0.0);
    double acc = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
        for (std::size_t k = 1; k <= m; ++k) {
            const double wj = 2 * std::numbers::pi * j / n, wk = 2 * std::numbers::pi * k / n;
            acc += c_zero + transform(wj + wk) + transform(wj - wk) - 2 * c0;
        }
    }
    return 1 + static_cast<double>(m) / n * acc / (static_cast<double>(m) * m) / (s2 * s2);
}

TEST(CltQn, GarchVarianceTracksFourthCumulantCorrection) {
    // Inflation above 1 is a genuine O(m/n) effect of the conditional heteroskedasticity.
    const auto r = run_clt_qn(base_config(ExperimentKind::CltQn, ProcessSpec::garch11(0.5, 0.2, 0.4), 10000, {0.5, 0.7}, 2000),
                              {4, false});
    ASSERT_EQ(r.cells.size(), 2u);
    for (const auto& cell : r.cells) {
        const double predicted = garch_clt_variance(0.5, 0.2, 0.4, 10000, cell.m);
        EXPECT_NEAR(cell.summary.variance, predicted, 0.1 * predicted) << "m=" << cell.m;
    }
    EXPECT_GT(garch_clt_variance(0.5, 0.2, 0.4, 10000, 630), 1.4);
}

TEST(CltWhittle, WarnsAboveRateCondition) {
    const auto ok = run_clt_whittle(base_config(ExperimentKind::CltWhittle, ProcessSpec::iid(1.0), 500, {0.6}, 2));
    EXPECT_TRUE(ok.warnings.empty());
    const auto warned = run_clt_whittle(base_config(ExperimentKind::CltWhittle, ProcessSpec::iid(1.0), 500, {0.8}, 2));
    EXPECT_EQ(warned.warnings.size(), 1u);
}

TEST(CltWhittle, SamplesMatchDirectFit) {
    const auto cfg = base_config(ExperimentKind::CltWhittle, ProcessSpec::stoch_vol(0.0, 0.5, 1.0), 1500, {0.65}, 2);
    const auto r = run_clt_whittle(cfg);
    for (std::size_t rep = 0; rep < 2; ++rep) {
        const auto x = simulate(cfg.process, 1500, replication_seed(cfg, 1500, rep));
        EXPECT_DOUBLE_EQ(r.cells[0].samples[rep], fit_local_whittle(x, r.cells[0].m).normalized);
    }
}

TEST(CltWhittle, WhiteNoiseMeanNearZero) {
    const auto r = run_clt_whittle(base_config(ExperimentKind::CltWhittle, ProcessSpec::iid(1.0), 10000, {0.6}, 2000));
    EXPECT_LT(std::abs(r.cells[0].summary.mean), 0.1);
}

TEST(Density, RejectsZeroReps) {
    auto cfg = base_config(ExperimentKind::DensitySamples, ProcessSpec::iid(1.0), 200, {0.6}, 1);
    cfg.reps = 0;
    EXPECT_LRV_ERROR(run_density_samples(cfg), ErrorCode::InsufficientReps);
}

TEST(Density, ResidualStatisticMatchesTest) {
    auto cfg = base_config(ExperimentKind::DensitySamples, ProcessSpec::garch11(0.5, 0.2, 0.4), 800, {0.65}, 3);
    cfg.statistic = DensityStatistic::ResidualStatistic;
    cfg.size_params = SizeParams{{0.3}, {0.25}, {0.05}};
    const auto r = run_density_samples(cfg);
    ASSERT_EQ(r.cells.size(), 1u);
    for (std::size_t rep = 0; rep < 3; ++rep) {
        const auto x = add_level_shift(simulate(cfg.process, 800, replication_seed(cfg, 800, rep)), 0.3, 0.25);
        EXPECT_DOUBLE_EQ(r.cells[0].samples[rep], lrd_test(x, r.cells[0].m, 0.05).statistic);
    }
}

TEST(Histogram, MassSumsToOne) {
    auto cfg = base_config(ExperimentKind::DensitySamples, ProcessSpec::garch11(0.5, 0.2, 0.4), 1000, {0.65}, 5000);
    const auto r = run_density_samples(cfg);
    ASSERT_EQ(r.cells[0].samples.size(), 5000u);
    const auto h = make_histogram(r.cells[0].samples);
    ASSERT_EQ(h.density.size(), kHistogramBins);
    double mass = 0.0;
    for (std::size_t b = 0; b < h.density.size(); ++b) mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
    EXPECT_NEAR(mass, 1.0, 1e-9);
    const auto [lo, hi] = std::minmax_element(r.cells[0].samples.begin(), r.cells[0].samples.end());
    EXPECT_EQ(h.edges.front(), *lo);
    EXPECT_EQ(h.edges.back(), *hi);
}

TEST(Histogram, ConstantSamples) {
    const std::vector<double> x(10, 2.0);
    const auto h = make_histogram(x, 4);
    double mass = 0.0;
    for (std::size_t b = 0; b < 4; ++b) mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
    EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(LevelShift, AddsDeltaAfterBreak) {
    const auto x = add_level_shift(TimeSeries(std::vector<double>(10, 0.0)), 2.0, 0.25);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(x[i], i < 2 ? 0.0 : 2.0);
}

TEST(SizeTable, CellsAndStandardErrors) {
    const auto t = run_size_table(size_config(60));
    EXPECT_EQ(t.cells.size(), 2u * 2u * 2u * 3u);
    EXPECT_TRUE(t.full_grid);
    for (const auto& c : t.cells) {
        EXPECT_GE(c.reject_pct, 0.0);
        EXPECT_LE(c.reject_pct, 100.0);
        const double p = static_cast<double>(c.rejections) / 60.0;
        EXPECT_DOUBLE_EQ(c.reject_pct, 100.0 * p);
        EXPECT_DOUBLE_EQ(c.std_error, 100.0 * std::sqrt(p * (1 - p) / 60.0));
    }
    // larger nominal level never rejects less on the same statistics
    const auto* a = find_cell(t, 0.3, 0.25, 0.6, 300, 0.01);
    const auto* b = find_cell(t, 0.3, 0.25, 0.6, 300, 0.10);
    ASSERT_TRUE(a && b);
    EXPECT_LE(a->rejections, b->rejections);
}

TEST(SizeTable, AnchorsRunUnlessFull) {
    auto cfg = size_config(20);
    cfg.anchors = {{1.0, 0.5, 0.7, 300}};
    const auto anchors = run_size_table(cfg);
    EXPECT_FALSE(anchors.full_grid);
    EXPECT_EQ(anchors.cells.size(), 3u);
    const auto full = run_size_table(cfg, {1, true});
    EXPECT_EQ(full.cells.size(), 24u);
    // shared random numbers: the anchor cell equals the matching full-grid cell
    for (double alpha : {0.01, 0.05, 0.10}) {
        EXPECT_EQ(find_cell(anchors, 1.0, 0.5, 0.7, 300, alpha)->rejections,
                  find_cell(full, 1.0, 0.5, 0.7, 300, alpha)->rejections);
    }
}

TEST(SizeTable, FullRepsUsedOnlyWithFullFlag) {
    auto cfg = size_config(10);
    cfg.full_reps = 30;
    EXPECT_EQ(effective_reps(cfg, {1, false}), 10u);
    EXPECT_EQ(effective_reps(cfg, {1, true}), 30u);
}

TEST(BiasRate, ExactExpectationMatchesDoubleSum) {
    for (const auto& spec : {ProcessSpec::linear({1.0, 0.5}), ProcessSpec::linear({1.0, -0.3, 0.2}, 2.0),
                             ProcessSpec::iid(3.0)}) {
        for (std::size_t m : {1u, 3u, 7u}) {
            EXPECT_NEAR(expected_smoothed_periodogram(spec, 60, m), expected_q_by_double_sum(spec, 60, m), 1e-12);
        }
    }
}

TEST(BiasRate, WhiteNoiseHasNoBias) {
    auto cfg = base_config(ExperimentKind::BiasRate, ProcessSpec::iid(1.0), 1000, {}, 2000);
    const auto r = check_bias_rate(cfg);
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto& row : r.rows) {
        EXPECT_NEAR(row.exact_bias, 0.0, 1e-15);
        EXPECT_LT(std::abs(row.mc_bias), 4.0 * row.mc_std_error);
    }
    EXPECT_TRUE(std::isnan(r.slopes[0].exact));
}

TEST(BiasRate, MovingAverageSlopeAndMonotonicity) {
    const auto spec = ProcessSpec::linear({1.0, 0.5});
    auto cfg = base_config(ExperimentKind::BiasRate, spec, 1000, {}, 2000);
    cfg.n_values = {1000, 2000, 4000};
    const auto r = check_bias_rate(cfg);
    for (const auto& s : r.slopes) {
        EXPECT_GE(s.exact, 1.2);
        EXPECT_LE(s.exact, 2.8);
    }
    for (const auto& row : r.rows) EXPECT_LT(std::abs(row.mc_mean - row.exact_mean), 4.0 * row.mc_std_error);
    // doubling n at fixed m/n never increases the exact bias
    for (double ratio : {0.02, 0.04, 0.08}) {
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t n = 250; n <= 16000; n *= 2) {
            const double bias =
                std::abs(expected_smoothed_periodogram(spec, n, bandwidth_for_ratio(n, ratio)) - theoretical_f0(spec));
            EXPECT_LE(bias, previous + 1e-14) << "n=" << n << " ratio=" << ratio;
            previous = bias;
        }
    }
}

TEST(Report, ContentHashIsGitBlobSha1) {
    // `printf 'hello\n' | git hash-object --stdin`
    EXPECT_EQ(content_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
    EXPECT_EQ(content_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Report, OutputsAreByteIdenticalAcrossRunsAndThreads) {
    auto cfg = base_config(ExperimentKind::DensitySamples, ProcessSpec::garch11(0.5, 0.2, 0.4), 500, {0.6, 0.7}, 50);
    const std::string text = "# echoed config\nreps = 50\n";
    const auto dir = std::filesystem::temp_directory_path() / "lrvkit_report_test";
    std::filesystem::remove_all(dir);
    const auto first = run_experiment(cfg, {1, false}, text, dir / "a");
    const auto second = run_experiment(cfg, {3, false}, text, dir / "b");
    ASSERT_EQ(first.files.size(), 3u);
    for (std::size_t i = 0; i < first.files.size(); ++i) {
        EXPECT_EQ(first.files[i].filename(), second.files[i].filename());
        EXPECT_EQ(slurp(first.files[i]), slurp(second.files[i]));
    }
    const std::string csv = slurp(dir / "a" / "unit.csv");
    EXPECT_NE(csv.find("# seed_rule: "), std::string::npos);
    EXPECT_NE(csv.find("# config_hash: " + content_hash(text)), std::string::npos);
    EXPECT_NE(csv.find("# config| reps = 50"), std::string::npos);

    // the samples file reads back as a series of 100 values
    const auto samples = read_series(dir / "a" / "unit.samples");
    EXPECT_EQ(samples.size(), 100u);
    std::filesystem::remove_all(dir);
}
