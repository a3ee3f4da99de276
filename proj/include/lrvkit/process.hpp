#pragma once

#include "lrvkit/random.hpp"
#include "lrvkit/time_series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lrvkit {

struct IidParams {
    double variance = 1.0;
};

/// X_t = sum_j psi_j e_{t-j}, e_t ~ N(0, variance). `coefficients` holds the
/// (possibly truncated) psi_0, psi_1, ...; `decay` is set when they follow
/// psi_j = (j+1)^{-d}.
struct LinearParams {
    std::vector<double> coefficients;
    double variance = 1.0;
    std::optional<double> decay;
};

/// r_t = sigma_t e_t, sigma_t^2 = alpha0 + alpha1 r_{t-1}^2 + beta1 sigma_{t-1}^2, e_t ~ N(0,1).
struct Garch11Params {
    double alpha0 = 0.5;
    double alpha1 = 0.2;
    double beta1 = 0.4;
};

/// r_t = exp(x_t/2) e_t, x_t = alpha + phi x_{t-1} + w_t, w_t ~ N(0, sigma_w2).
struct StochVolParams {
    double alpha = 0.0;
    double phi = 0.5;
    double sigma_w2 = 1.0;
};

enum class ProcessKind { Iid, Linear, Garch11, StochVol };

/// Relative l2 tail mass at which power-decay coefficient sequences are cut.
inline constexpr double kLinearTailTolerance = 1e-8;
inline constexpr std::size_t kLinearMaxTerms = 1'000'000;
/// Steps discarded before emitting GARCH / SV output, also the depth of the
/// innovation history used when coupling these processes.
inline constexpr std::size_t kBurnIn = 2000;

/// A simulatable Bernoulli shift with validated parameters.
class ProcessSpec {
public:
    static ProcessSpec iid(double variance = 1.0);
    /// psi_j = (j+1)^{-d}, d > 1, truncated at the first J whose l2 tail is below
    /// kLinearTailTolerance of the total (J capped at kLinearMaxTerms).
    static ProcessSpec linear_power_decay(double d, double variance = 1.0);
    static ProcessSpec linear(std::vector<double> coefficients, double variance = 1.0);
    static ProcessSpec garch11(double alpha0, double alpha1, double beta1);
    static ProcessSpec stoch_vol(double alpha, double phi, double sigma_w2);

    [[nodiscard]] ProcessKind kind() const noexcept { return static_cast<ProcessKind>(params_.index()); }
    [[nodiscard]] const IidParams& iid_params() const { return std::get<IidParams>(params_); }
    [[nodiscard]] const LinearParams& linear_params() const { return std::get<LinearParams>(params_); }
    [[nodiscard]] const Garch11Params& garch_params() const { return std::get<Garch11Params>(params_); }
    [[nodiscard]] const StochVolParams& sv_params() const { return std::get<StochVolParams>(params_); }

    /// Short human-readable description, e.g. "garch11(alpha0=0.5,alpha1=0.2,beta1=0.4)".
    [[nodiscard]] std::string describe() const;

private:
    using Params = std::variant<IidParams, LinearParams, Garch11Params, StochVolParams>;
    explicit ProcessSpec(Params p) : params_(std::move(p)) {}
    Params params_;
};

/// Deterministic function of (spec, n, seed).
[[nodiscard]] TimeSeries simulate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

/// Stationary variance gamma(0).
[[nodiscard]] double stationary_variance(const ProcessSpec& spec);

/// Theoretical autocovariance gamma(h). GARCH and SV are white noise.
/// Linear specs use the coefficients actually simulated.
[[nodiscard]] double theoretical_autocovariance(const ProcessSpec& spec, long h);

/// f(0) = (1/2pi) sum_h gamma(h).
[[nodiscard]] double theoretical_f0(const ProcessSpec& spec);

/// E(beta1 + alpha1 e^2)^2 for standard normal e: beta1^2 + 2 alpha1 beta1 + 3 alpha1^2.
[[nodiscard]] double garch_fourth_moment_factor(double alpha1, double beta1) noexcept;
/// True when the GARCH(1,1) fourth moment exists (Gaussian innovations).
[[nodiscard]] bool garch_fourth_moment_check(const Garch11Params& params) noexcept;

/// Closed form of E|u_t - u_t^{(m)}|^4 for the SV volatility factor
/// u_t = exp(x_t / 2), where u_t^{(m)} redraws w_{t-m}, w_{t-m-1}, ....
/// With V = sigma_w2/(1-phi^2), v = phi^{2m} V and mu = alpha/(1-phi):
///   exp(2 mu + 2 V) * (2 - 8 exp(-3v/4) + 6 exp(-v)),
/// which is 3 v^2/4 * exp(2 mu + 2 V) to leading order, i.e. O(phi^{4m}).
[[nodiscard]] double sv_coupling_fourth_moment(const StochVolParams& params, std::size_t m);

/// (sum_{j >= t} (j+1)^{-2d})^{1/2}, the l2 tail of power-decay coefficients.
[[nodiscard]] double power_decay_tail_norm(double d, std::size_t t);

// Bernoulli-shift representation used for coupling.

/// One innovation: e_t for iid / linear / GARCH; the pair (w_t, e_t) for SV.
struct Innovation {
    double eps = 0.0;
    double w = 0.0;
};

/// Number of most recent innovations X_t is computed from.
[[nodiscard]] std::size_t shift_depth(const ProcessSpec& spec);

[[nodiscard]] Innovation draw_innovation(const ProcessSpec& spec, RandomStream& rng);

/// X_t from innovations ordered newest first (index 0 is time t, index k is
/// time t-k). GARCH and SV start from their stationary mean state at the
/// oldest supplied time.
[[nodiscard]] double evaluate_shift(const ProcessSpec& spec, std::span<const Innovation> newest_first);

}  // namespace lrvkit
