#include "lrvkit/montecarlo.hpp"

#include "lrvkit/changepoint.hpp"
#include "lrvkit/error.hpp"
#include "lrvkit/random.hpp"
#include "lrvkit/spectral.hpp"
#include "lrvkit/whittle.hpp"

#include "fft.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace lrvkit {

namespace {

void require_kind(const ExperimentConfig& config, ExperimentKind kind) {
    if (config.kind != kind) {
        throw Error(ErrorCode::ConfigError, "experiment '" + config.name + "' has kind " +
                                                std::string(to_string(config.kind)) + ", expected " +
                                                std::string(to_string(kind)));
    }
}

PeriodogramOrdinates prefix(const PeriodogramOrdinates& full, std::size_t m) {
    PeriodogramOrdinates out;
    out.n = full.n;
    out.indices.assign(full.indices.begin(), full.indices.begin() + static_cast<long>(m));
    out.frequencies.assign(full.frequencies.begin(), full.frequencies.begin() + static_cast<long>(m));
    out.ordinates.assign(full.ordinates.begin(), full.ordinates.begin() + static_cast<long>(m));
    return out;
}

double prefix_mean(const PeriodogramOrdinates& ords, std::size_t m) {
    CompensatedSum s;
    for (std::size_t j = 0; j < m; ++j) s += ords.ordinates[j];
    return s.value() / static_cast<double>(m);
}

struct BandwidthCell {
    std::size_t m = 0;
    std::optional<double> exponent;
};

std::vector<BandwidthCell> bandwidth_cells(const ExperimentConfig& config, std::size_t n) {
    std::vector<BandwidthCell> cells;
    if (config.explicit_m) {
        cells.push_back({*config.explicit_m, std::nullopt});
    } else {
        for (double b : config.m_exponents) {
            cells.push_back({static_cast<std::size_t>(bandwidth_from_exponent(static_cast<long>(n), b)), b});
        }
    }
    for (const auto& c : cells) validate_bandwidth(n, c.m);
    return cells;
}

void finish(SampleExperiment& result) {
    for (auto& cell : result.cells) cell.summary = summarize(cell.samples);
}

// Runs `per_rep(series, rep, slots)` for every replication at every n. The
// callback fills one value per cell; cells are laid out as returned by make_cells.
template <typename MakeCells, typename PerRep>
SampleExperiment run_sampling(const ExperimentConfig& config, const RunOptions& options, MakeCells make_cells,
                              PerRep per_rep) {
    const std::size_t reps = effective_reps(config, options);
    if (reps == 0) throw Error(ErrorCode::InsufficientReps, "experiment '" + config.name + "' needs reps >= 1");
    SampleExperiment result;
    for (std::size_t n : config.n_values) {
        std::vector<SampleCell> cells = make_cells(n);
        for (auto& c : cells) c.samples.assign(reps, 0.0);
        detail::parallel_for(reps, options.threads, [&](std::size_t rep) {
            const TimeSeries series = simulate(config.process, n, replication_seed(config, n, rep));
            per_rep(series, rep, cells);
        });
        for (auto& c : cells) result.cells.push_back(std::move(c));
    }
    finish(result);
    return result;
}

std::vector<SampleCell> plain_cells(const ExperimentConfig& config, std::size_t n) {
    std::vector<SampleCell> cells;
    for (const auto& b : bandwidth_cells(config, n)) {
        SampleCell c;
        c.n = n;
        c.m = b.m;
        c.m_exponent = b.exponent;
        cells.push_back(std::move(c));
    }
    return cells;
}

WhittleOptions whittle_options(const ExperimentConfig& config) {
    WhittleOptions opts;
    opts.bounds = config.bounds;
    return opts;
}

SampleExperiment normalized_lwe_samples(const ExperimentConfig& config, const RunOptions& options) {
    const WhittleOptions opts = whittle_options(config);
    return run_sampling(
        config, options, [&](std::size_t n) { return plain_cells(config, n); },
        [&](const TimeSeries& series, std::size_t rep, std::vector<SampleCell>& cells) {
            std::size_t top = 0;
            for (const auto& c : cells) top = std::max(top, c.m);
            const PeriodogramOrdinates ords = periodogram(series, top);
            for (auto& c : cells) c.samples[rep] = fit_local_whittle(prefix(ords, c.m), opts).normalized;
        });
}

}  // namespace

std::size_t effective_reps(const ExperimentConfig& config, const RunOptions& options) {
    if (options.full && config.full_reps) return *config.full_reps;
    return config.reps;
}

std::uint64_t replication_seed(const ExperimentConfig& config, std::size_t n, std::size_t rep) {
    return derive_seed({config.master_seed, stable_hash(config.name), static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(rep)});
}

TimeSeries add_level_shift(const TimeSeries& series, double delta, double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0,1)");
    const std::size_t n = series.size();
    const auto n_star = static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta));
    std::vector<double> values(series.values().begin(), series.values().end());
    for (std::size_t i = n_star; i < n; ++i) values[i] += delta;
    return TimeSeries(std::move(values));
}

SampleExperiment run_clt_qn(const ExperimentConfig& config, const RunOptions& options) {
    require_kind(config, ExperimentKind::CltQn);
    const double f0 = theoretical_f0(config.process);
    if (!(f0 > 0.0)) throw Error(ErrorCode::InvalidF0, "process has no positive theoretical f(0)");
    return run_sampling(
        config, options, [&](std::size_t n) { return plain_cells(config, n); },
        [&](const TimeSeries& series, std::size_t rep, std::vector<SampleCell>& cells) {
            std::size_t top = 0;
            for (const auto& c : cells) top = std::max(top, c.m);
            const PeriodogramOrdinates ords = periodogram(series, top);
            for (auto& c : cells) {
                const double q = prefix_mean(ords, c.m);
                c.samples[rep] = std::sqrt(static_cast<double>(c.m)) * (q - f0) / f0;
            }
        });
}

SampleExperiment run_clt_whittle(const ExperimentConfig& config, const RunOptions& options) {
    require_kind(config, ExperimentKind::CltWhittle);
    std::vector<std::string> warnings;
    for (double b : config.m_exponents) {
        if (b >= 0.8) {
            std::ostringstream msg;
            msg << "m_exponent " << b << " >= 4/5 violates the rate condition m^5 (log m)^2 / n^4 -> 0";
            warnings.push_back(msg.str());
        }
    }
    SampleExperiment result = normalized_lwe_samples(config, options);
    result.warnings = std::move(warnings);
    return result;
}

SampleExperiment run_density_samples(const ExperimentConfig& config, const RunOptions& options) {
    require_kind(config, ExperimentKind::DensitySamples);
    if (effective_reps(config, options) == 0) {
        throw Error(ErrorCode::InsufficientReps, "density experiment needs reps >= 1");
    }
    if (config.statistic == DensityStatistic::NormalizedLwe) return normalized_lwe_samples(config, options);

    const WhittleOptions opts = whittle_options(config);
    const SizeParams& sp = *config.size_params;
    auto make_cells = [&](std::size_t n) {
        std::vector<SampleCell> cells;
        for (double delta : sp.deltas) {
            for (double theta : sp.thetas) {
                for (auto c : plain_cells(config, n)) {
                    c.delta = delta;
                    c.theta = theta;
                    cells.push_back(std::move(c));
                }
            }
        }
        return cells;
    };
    return run_sampling(config, options, make_cells,
                        [&](const TimeSeries& series, std::size_t rep, std::vector<SampleCell>& cells) {
                            for (auto& c : cells) {
                                const TimeSeries x = add_level_shift(series, *c.delta, *c.theta);
                                c.samples[rep] = lrd_test(x, c.m, 0.05, opts).statistic;
                            }
                        });
}

SizeTable run_size_table(const ExperimentConfig& config, const RunOptions& options) {
    require_kind(config, ExperimentKind::SizeTable);
    const std::size_t reps = effective_reps(config, options);
    if (reps == 0) throw Error(ErrorCode::InsufficientReps, "size table needs reps >= 1");
    const SizeParams& sp = *config.size_params;

    // Cell design (delta, theta, beta) grouped by n so replications at one n
    // share the simulated r_t.
    struct Design {
        double delta, theta, beta;
        std::size_t m;
    };
    std::map<std::size_t, std::vector<Design>> by_n;
    const bool full = options.full || config.anchors.empty();
    if (full) {
        for (std::size_t n : config.n_values) {
            for (double delta : sp.deltas) {
                for (double theta : sp.thetas) {
                    for (double beta : config.m_exponents) {
                        const auto m = static_cast<std::size_t>(bandwidth_from_exponent(static_cast<long>(n), beta));
                        by_n[n].push_back({delta, theta, beta, m});
                    }
                }
            }
        }
    } else {
        for (const auto& a : config.anchors) {
            const auto m = static_cast<std::size_t>(bandwidth_from_exponent(static_cast<long>(a.n), a.m_exponent));
            by_n[a.n].push_back({a.delta, a.theta, a.m_exponent, m});
        }
    }

    const WhittleOptions opts = whittle_options(config);
    SizeTable table;
    table.reps = reps;
    table.full_grid = full;
    for (const auto& [n, designs] : by_n) {
        for (const auto& d : designs) validate_bandwidth(n, d.m);
        // statistic per (design, rep); rejection counts are formed afterwards
        std::vector<std::vector<double>> stats(designs.size(), std::vector<double>(reps));
        detail::parallel_for(reps, options.threads, [&](std::size_t rep) {
            const TimeSeries r = simulate(config.process, n, replication_seed(config, n, rep));
            for (std::size_t k = 0; k < designs.size(); ++k) {
                const TimeSeries x = add_level_shift(r, designs[k].delta, designs[k].theta);
                stats[k][rep] = lrd_test(x, designs[k].m, 0.05, opts).statistic;
            }
        });
        for (std::size_t k = 0; k < designs.size(); ++k) {
            for (double alpha : sp.levels) {
                SizeCell cell;
                cell.delta = designs[k].delta;
                cell.theta = designs[k].theta;
                cell.m_exponent = designs[k].beta;
                cell.n = n;
                cell.m = designs[k].m;
                cell.alpha = alpha;
                cell.reps = reps;
                cell.rejections = static_cast<std::size_t>(
                    std::count_if(stats[k].begin(), stats[k].end(), [&](double t) { return reject_at(t, alpha); }));
                const double p = static_cast<double>(cell.rejections) / static_cast<double>(reps);
                cell.reject_pct = 100.0 * p;
                cell.std_error = 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
                table.cells.push_back(cell);
            }
        }
    }
    return table;
}

const SizeCell* find_cell(const SizeTable& table, double delta, double theta, double m_exponent, std::size_t n,
                          double alpha) {
    constexpr double eps = 1e-12;
    for (const auto& c : table.cells) {
        if (std::abs(c.delta - delta) < eps && std::abs(c.theta - theta) < eps &&
            std::abs(c.m_exponent - m_exponent) < eps && c.n == n && std::abs(c.alpha - alpha) < eps) {
            return &c;
        }
    }
    return nullptr;
}

double expected_smoothed_periodogram(const ProcessSpec& spec, std::size_t n, std::size_t m) {
    validate_bandwidth(n, m);
    const CosineWeights a(n, m);
    std::vector<double> gamma;
    if (spec.kind() == ProcessKind::Linear) {
        // gamma(h) = sigma^2 sum_j psi_j psi_{j+h}, via one correlation
        const auto& p = spec.linear_params();
        const auto& psi = p.coefficients;
        const std::size_t lags = std::min(n, psi.size());
        if (psi.size() * lags <= 20'000'000) {
            gamma.resize(lags);
            for (std::size_t h = 0; h < lags; ++h) gamma[h] = theoretical_autocovariance(spec, static_cast<long>(h));
        } else {
            std::vector<double> reversed(psi.rbegin(), psi.rend());
            const auto corr = detail::fft_convolve(psi, reversed);
            gamma.resize(lags);
            for (std::size_t h = 0; h < lags; ++h) gamma[h] = p.variance * corr[psi.size() - 1 + h];
        }
    } else {
        gamma.push_back(theoretical_autocovariance(spec, 0));
    }
    CompensatedSum s;
    s += a.at(0) * gamma[0];
    for (std::size_t h = 1; h < gamma.size(); ++h) {
        const double bartlett = 1.0 - static_cast<double>(h) / static_cast<double>(n);
        s += 2.0 * bartlett * a.at(static_cast<long>(h)) * gamma[h];
    }
    return s.value() / kTwoPi;
}

std::size_t bandwidth_for_ratio(std::size_t n, double ratio) {
    const auto m = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    return std::max<std::size_t>(1, m);
}

BiasReport check_bias_rate(const ExperimentConfig& config, const RunOptions& options) {
    require_kind(config, ExperimentKind::BiasRate);
    const std::size_t reps = effective_reps(config, options);
    if (reps == 0) throw Error(ErrorCode::InsufficientReps, "bias experiment needs reps >= 1");
    const double f0 = theoretical_f0(config.process);

    BiasReport report;
    report.reps = reps;
    for (std::size_t n : config.n_values) {
        std::vector<std::size_t> ms;
        for (double r : config.bias_ratios) {
            ms.push_back(bandwidth_for_ratio(n, r));
            validate_bandwidth(n, ms.back());
        }
        const std::size_t top = *std::max_element(ms.begin(), ms.end());
        std::vector<std::vector<double>> q(ms.size(), std::vector<double>(reps));
        detail::parallel_for(reps, options.threads, [&](std::size_t rep) {
            const TimeSeries x = simulate(config.process, n, replication_seed(config, n, rep));
            const PeriodogramOrdinates ords = periodogram(x, top);
            for (std::size_t k = 0; k < ms.size(); ++k) q[k][rep] = prefix_mean(ords, ms[k]);
        });

        std::vector<double> log_ratio, log_exact, log_mc;
        bool exact_ok = true, mc_ok = true;
        for (std::size_t k = 0; k < ms.size(); ++k) {
            BiasRow row;
            row.n = n;
            row.m = ms[k];
            row.ratio = static_cast<double>(ms[k]) / static_cast<double>(n);
            row.f0 = f0;
            row.exact_mean = expected_smoothed_periodogram(config.process, n, ms[k]);
            row.exact_bias = row.exact_mean - f0;
            const auto [mean_q, se] = mean_with_std_error(q[k]);
            row.mc_mean = mean_q;
            row.mc_std_error = se;
            row.mc_bias = mean_q - f0;
            report.rows.push_back(row);

            log_ratio.push_back(std::log(row.ratio));
            const double eb = std::abs(row.exact_bias);
            const double mb = std::abs(row.mc_bias);
            exact_ok = exact_ok && eb > 1e-15 * f0;
            mc_ok = mc_ok && mb > 0.0;
            log_exact.push_back(std::log(eb));
            log_mc.push_back(std::log(mb));
        }
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        BiasSlope slope;
        slope.n = n;
        slope.exact = exact_ok && ms.size() >= 2 ? least_squares_slope(log_ratio, log_exact) : nan;
        slope.monte_carlo = mc_ok && ms.size() >= 2 ? least_squares_slope(log_ratio, log_mc) : nan;
        report.slopes.push_back(slope);
    }
    return report;
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins) {
    if (samples.empty()) throw Error(ErrorCode::InsufficientReps, "histogram needs at least one sample");
    if (bins == 0) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
    h.edges[bins] = hi;
    std::vector<std::size_t> counts(bins, 0);
    for (double x : samples) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        counts[std::min(b, bins - 1)]++;
    }
    h.density.resize(bins);
    const double total = static_cast<double>(samples.size());
    for (std::size_t b = 0; b < bins; ++b) {
        h.density[b] = static_cast<double>(counts[b]) / (total * (h.edges[b + 1] - h.edges[b]));
    }
    return h;
}

}  // namespace lrvkit
