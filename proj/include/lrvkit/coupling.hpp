#pragma once

#include "lrvkit/process.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lrvkit {

enum class CouplingMode {
    /// X_{t,{0}}: only the innovation at time 0 is redrawn. Estimates delta_{t,4}.
    ReplaceEpsilon0,
    /// X_t^{(t)}: every innovation at time <= 0 is redrawn. Estimates ||X_t - X_t^{(t)}||_4.
    ReplaceTail,
};

/// Monte Carlo estimates of ||X_t - X_t'||_4 for a coupled copy X_t', one per lag t.
struct CouplingDiagnostics {
    CouplingMode mode = CouplingMode::ReplaceEpsilon0;
    std::vector<std::size_t> t_values;
    std::vector<double> estimates;       // (E|X_t - X_t'|^4)^{1/4}
    std::vector<double> std_errors;      // delta-method standard errors of `estimates`
    std::vector<double> fourth_moments;  // E|X_t - X_t'|^4
    std::vector<double> fourth_moment_std_errors;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    /// Least-squares slope of log(estimate) on log(t + 1) over positive estimates;
    /// NaN when fewer than two are positive.
    double decay_exponent_hat = 0.0;
};

inline constexpr std::size_t kMinCouplingReps = 100;

/// Both members of each coupled pair share every innovation except the
/// replaced block (common random numbers). Replication i draws from a stream
/// derived from (seed, i), so results do not depend on `threads`.
[[nodiscard]] CouplingDiagnostics coupled_paths(const ProcessSpec& spec, std::span<const std::size_t> t_values,
                                                CouplingMode mode, std::size_t reps, std::uint64_t seed,
                                                std::size_t threads = 1);

}  // namespace lrvkit
