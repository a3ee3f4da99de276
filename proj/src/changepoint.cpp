#include "lrvkit/changepoint.hpp"

#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace lrvkit {

ChangePointResult cusum_estimate(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 2) throw Error(ErrorCode::InvalidLength, "CUSUM needs at least 2 observations");
    const auto x = series.values();

    // Anchoring at X_1 leaves the statistic unchanged and makes a constant
    // series produce exact zeros.
    const double anchor = x[0];
    std::vector<double> partial(n);
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
        acc.add(x[k] - anchor);
        partial[k] = acc.value();
    }
    const double total = partial[n - 1];

    ChangePointResult out;
    out.cusum_values.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t k = 1; k <= n; ++k) {
        out.cusum_values[k - 1] = std::abs(partial[k - 1] - (static_cast<double>(k) / dn) * total);
    }
    out.cusum_values[n - 1] = 0.0;  // S_N - S_N, exactly

    std::size_t best = 1;
    for (std::size_t k = 2; k <= n - 1; ++k) {
        if (out.cusum_values[k - 1] > out.cusum_values[best - 1]) best = k;
    }
    out.n_hat = best;
    out.max_value = out.cusum_values[best - 1];
    return out;
}

TimeSeries residualize(const TimeSeries& series, std::size_t n_hat) {
    const std::size_t n = series.size();
    if (n < 2 || n_hat < 1 || n_hat > n - 1) {
        throw Error(ErrorCode::BreakOutOfRange,
                    "break " + std::to_string(n_hat) + " outside [1, " + std::to_string(n == 0 ? 0 : n - 1) + "]");
    }
    std::vector<double> r(series.values().begin(), series.values().end());
    auto center = [](std::span<double> seg) {
        for (int pass = 0; pass < 2; ++pass) {
            const double mu = mean(seg);
            for (double& v : seg) v -= mu;
        }
    };
    center(std::span<double>(r).first(n_hat));
    center(std::span<double>(r).subspan(n_hat));
    return TimeSeries(std::move(r), true);
}

void write_record(std::ostream& out, const LrdTestOutcome& o) {
    const auto old_precision = out.precision(17);
    out << "n_hat=" << o.n_hat << '\n'
        << "h_hat_residual=" << o.h_hat_residual << '\n'
        << "statistic=" << o.statistic << '\n'
        << "p_value=" << o.p_value << '\n'
        << "reject=" << (o.reject ? "true" : "false") << '\n'
        << "alpha=" << o.alpha << '\n'
        << "m=" << o.m << '\n';
    out.precision(old_precision);
}

bool reject_at(double statistic, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    return statistic > normal_quantile(1.0 - alpha);
}

LrdTestOutcome lrd_test(const TimeSeries& series, std::size_t m, double alpha, const WhittleOptions& options) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    validate_bandwidth(series.size(), m);
    validate_bounds(options.bounds);

    const auto cp = cusum_estimate(series);
    const auto residuals = residualize(series, cp.n_hat);
    const auto fit = fit_local_whittle(residuals, m, options);

    LrdTestOutcome out;
    out.n_hat = cp.n_hat;
    out.h_hat_residual = fit.h_hat;
    out.statistic = fit.normalized;
    out.p_value = normal_upper_tail(out.statistic);
    out.alpha = alpha;
    out.reject = reject_at(out.statistic, alpha);
    out.m = m;
    return out;
}

}  // namespace lrvkit
