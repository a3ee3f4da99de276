#include "lrvkit/coupling.hpp"

#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lrvkit {

CouplingDiagnostics coupled_paths(const ProcessSpec& spec, std::span<const std::size_t> t_values, CouplingMode mode,
                                  std::size_t reps, std::uint64_t seed, std::size_t threads) {
    if (reps < kMinCouplingReps) {
        throw Error(ErrorCode::InsufficientReps, "coupling needs at least " + std::to_string(kMinCouplingReps) + " reps");
    }
    if (t_values.empty()) throw Error(ErrorCode::InvalidArgument, "no lags requested");

    const std::size_t lags = t_values.size();
    const std::size_t max_t = *std::max_element(t_values.begin(), t_values.end());
    const std::size_t depth = std::max(shift_depth(spec), max_t + 1);

    // powers[i * lags + k] = |X_t - X_t'|^4 for replication i, lag k
    std::vector<double> powers(reps * lags);
    detail::parallel_for(reps, threads, [&](std::size_t i) {
        RandomStream rng(derive_seed({seed, i}));
        std::vector<Innovation> original(depth), fresh(depth);
        for (auto& inn : original) inn = draw_innovation(spec, rng);
        for (auto& inn : fresh) inn = draw_innovation(spec, rng);
        const double x = evaluate_shift(spec, original);

        std::vector<Innovation> coupled(depth);
        for (std::size_t k = 0; k < lags; ++k) {
            const std::size_t t = t_values[k];
            coupled = original;
            if (mode == CouplingMode::ReplaceEpsilon0) {
                coupled[t] = fresh[t];
            } else {
                std::copy(fresh.begin() + static_cast<std::ptrdiff_t>(t), fresh.end(),
                          coupled.begin() + static_cast<std::ptrdiff_t>(t));
            }
            const double diff = x - evaluate_shift(spec, coupled);
            const double d2 = diff * diff;
            powers[i * lags + k] = d2 * d2;
        }
    });

    CouplingDiagnostics out;
    out.mode = mode;
    out.t_values.assign(t_values.begin(), t_values.end());
    out.reps = reps;
    out.seed = seed;
    std::vector<double> column(reps);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < lags; ++k) {
        for (std::size_t i = 0; i < reps; ++i) column[i] = powers[i * lags + k];
        const auto [m4, se4] = mean_with_std_error(column);
        const double est = std::pow(m4, 0.25);
        out.fourth_moments.push_back(m4);
        out.fourth_moment_std_errors.push_back(se4);
        out.estimates.push_back(est);
        out.std_errors.push_back(m4 > 0.0 ? 0.25 * std::pow(m4, -0.75) * se4 : 0.0);
        if (est > 0.0) {
            xs.push_back(std::log(static_cast<double>(t_values[k]) + 1.0));
            ys.push_back(std::log(est));
        }
    }
    bool distinct = xs.size() >= 2 && std::any_of(xs.begin(), xs.end(), [&](double v) { return v != xs.front(); });
    out.decay_exponent_hat = distinct ? least_squares_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace lrvkit
