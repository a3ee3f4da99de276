#include "lrvkit/process.hpp"

#include "fft.hpp"
#include "lrvkit/error.hpp"
#include "lrvkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lrvkit {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw Error(ErrorCode::InvalidSpec, message);
}

bool finite(double x) { return std::isfinite(x); }

// sum_{k >= first} k^{-s} for s > 1: direct terms, then an Euler-Maclaurin tail.
double power_tail_sum(double s, std::size_t first) {
    constexpr std::size_t kDirectTerms = 2000;
    const std::size_t last = first + kDirectTerms;
    CompensatedSum acc;
    for (std::size_t k = last; k-- > first;) acc.add(std::pow(static_cast<double>(k), -s));
    const double big_k = static_cast<double>(last);
    acc.add(std::pow(big_k, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(big_k, -s) +
            s / 12.0 * std::pow(big_k, -s - 1.0));
    return acc.value();
}

std::vector<double> power_decay_coefficients(double d) {
    const double total = power_tail_sum(2.0 * d, 1);
    // Smallest J with tail(J) = sum_{j >= J} psi_j^2 below the tolerance.
    std::size_t lo = 1, hi = kLinearMaxTerms;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (power_tail_sum(2.0 * d, mid + 1) < kLinearTailTolerance * total) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    std::vector<double> psi(lo);
    for (std::size_t j = 0; j < lo; ++j) psi[j] = std::pow(static_cast<double>(j + 1), -d);
    return psi;
}

double sv_mean_log_variance(const StochVolParams& p) { return p.alpha / (1.0 - p.phi); }
double sv_var_log_variance(const StochVolParams& p) { return p.sigma_w2 / (1.0 - p.phi * p.phi); }

}  // namespace

ProcessSpec ProcessSpec::iid(double variance) {
    require(finite(variance) && variance > 0.0, "iid variance must be positive");
    return ProcessSpec(IidParams{variance});
}

ProcessSpec ProcessSpec::linear_power_decay(double d, double variance) {
    require(finite(d) && d > 1.0, "power-decay exponent d must exceed 1");
    require(finite(variance) && variance > 0.0, "innovation variance must be positive");
    return ProcessSpec(LinearParams{power_decay_coefficients(d), variance, d});
}

ProcessSpec ProcessSpec::linear(std::vector<double> coefficients, double variance) {
    require(!coefficients.empty(), "linear process needs at least one coefficient");
    require(coefficients.size() <= kLinearMaxTerms, "too many linear coefficients");
    for (double c : coefficients) require(finite(c), "linear coefficients must be finite");
    require(finite(variance) && variance > 0.0, "innovation variance must be positive");
    return ProcessSpec(LinearParams{std::move(coefficients), variance, std::nullopt});
}

ProcessSpec ProcessSpec::garch11(double alpha0, double alpha1, double beta1) {
    require(finite(alpha0) && alpha0 > 0.0, "GARCH alpha0 must be positive");
    require(finite(alpha1) && alpha1 >= 0.0, "GARCH alpha1 must be nonnegative");
    require(finite(beta1) && beta1 >= 0.0, "GARCH beta1 must be nonnegative");
    require(alpha1 + beta1 < 1.0, "GARCH needs alpha1 + beta1 < 1");
    return ProcessSpec(Garch11Params{alpha0, alpha1, beta1});
}

ProcessSpec ProcessSpec::stoch_vol(double alpha, double phi, double sigma_w2) {
    require(finite(alpha), "SV alpha must be finite");
    require(finite(phi) && std::abs(phi) < 1.0, "SV needs |phi| < 1");
    require(finite(sigma_w2) && sigma_w2 > 0.0, "SV sigma_w2 must be positive");
    return ProcessSpec(StochVolParams{alpha, phi, sigma_w2});
}

std::string ProcessSpec::describe() const {
    std::ostringstream os;
    os.precision(10);
    switch (kind()) {
        case ProcessKind::Iid: os << "iid(variance=" << iid_params().variance << ")"; break;
        case ProcessKind::Linear: {
            const auto& p = linear_params();
            os << "linear(";
            if (p.decay) {
                os << "d=" << *p.decay;
            } else {
                os << "coefficients=";
                for (std::size_t i = 0; i < p.coefficients.size(); ++i) os << (i ? ";" : "") << p.coefficients[i];
            }
            os << ",terms=" << p.coefficients.size() << ",variance=" << p.variance << ")";
            break;
        }
        case ProcessKind::Garch11: {
            const auto& p = garch_params();
            os << "garch11(alpha0=" << p.alpha0 << ",alpha1=" << p.alpha1 << ",beta1=" << p.beta1 << ")";
            break;
        }
        case ProcessKind::StochVol: {
            const auto& p = sv_params();
            os << "sv(alpha=" << p.alpha << ",phi=" << p.phi << ",sigma_w2=" << p.sigma_w2 << ")";
            break;
        }
    }
    return os.str();
}

TimeSeries simulate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidLength, "simulate needs n >= 1");
    RandomStream rng(seed);
    std::vector<double> out(n);

    switch (spec.kind()) {
        case ProcessKind::Iid: {
            const double sd = std::sqrt(spec.iid_params().variance);
            for (double& x : out) x = sd * rng.normal();
            break;
        }
        case ProcessKind::Linear: {
            const auto& p = spec.linear_params();
            const std::size_t terms = p.coefficients.size();
            const double sd = std::sqrt(p.variance);
            std::vector<double> eps(n + terms - 1);
            for (double& e : eps) e = sd * rng.normal();
            // out[t] = sum_k psi_k eps[t + terms - 1 - k]
            if (static_cast<double>(n) * static_cast<double>(terms) <= 2e7) {
                for (std::size_t t = 0; t < n; ++t) {
                    double s = 0.0;
                    const std::size_t base = t + terms - 1;
                    for (std::size_t k = 0; k < terms; ++k) s += p.coefficients[k] * eps[base - k];
                    out[t] = s;
                }
            } else {
                const auto conv = detail::fft_convolve(eps, p.coefficients);
                for (std::size_t t = 0; t < n; ++t) out[t] = conv[t + terms - 1];
            }
            break;
        }
        case ProcessKind::Garch11: {
            const auto& p = spec.garch_params();
            double sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
            for (std::size_t t = 0; t < kBurnIn + n; ++t) {
                const double r = std::sqrt(sigma2) * rng.normal();
                if (t >= kBurnIn) out[t - kBurnIn] = r;
                sigma2 = p.alpha0 + p.alpha1 * r * r + p.beta1 * sigma2;
            }
            break;
        }
        case ProcessKind::StochVol: {
            const auto& p = spec.sv_params();
            const double sw = std::sqrt(p.sigma_w2);
            double x = sv_mean_log_variance(p) + std::sqrt(sv_var_log_variance(p)) * rng.normal();
            for (std::size_t t = 0; t < kBurnIn + n; ++t) {
                x = p.alpha + p.phi * x + sw * rng.normal();
                const double r = std::exp(0.5 * x) * rng.normal();
                if (t >= kBurnIn) out[t - kBurnIn] = r;
            }
            break;
        }
    }
    return TimeSeries(std::move(out));
}

double stationary_variance(const ProcessSpec& spec) { return theoretical_autocovariance(spec, 0); }

double theoretical_autocovariance(const ProcessSpec& spec, long h) {
    const std::size_t lag = static_cast<std::size_t>(h < 0 ? -h : h);
    switch (spec.kind()) {
        case ProcessKind::Iid: return lag == 0 ? spec.iid_params().variance : 0.0;
        case ProcessKind::Linear: {
            const auto& p = spec.linear_params();
            const auto& psi = p.coefficients;
            double s = 0.0;
            for (std::size_t j = 0; j + lag < psi.size(); ++j) s += psi[j] * psi[j + lag];
            return p.variance * s;
        }
        case ProcessKind::Garch11: {
            const auto& p = spec.garch_params();
            return lag == 0 ? p.alpha0 / (1.0 - p.alpha1 - p.beta1) : 0.0;
        }
        case ProcessKind::StochVol: {
            const auto& p = spec.sv_params();
            return lag == 0 ? std::exp(sv_mean_log_variance(p) + 0.5 * sv_var_log_variance(p)) : 0.0;
        }
    }
    return 0.0;
}

double theoretical_f0(const ProcessSpec& spec) {
    if (spec.kind() == ProcessKind::Linear) {
        const auto& p = spec.linear_params();
        const double s = accurate_sum(p.coefficients);
        return p.variance * s * s / kTwoPi;
    }
    return stationary_variance(spec) / kTwoPi;
}

double garch_fourth_moment_factor(double alpha1, double beta1) noexcept {
    return beta1 * beta1 + 2.0 * alpha1 * beta1 + 3.0 * alpha1 * alpha1;
}

bool garch_fourth_moment_check(const Garch11Params& p) noexcept {
    return garch_fourth_moment_factor(p.alpha1, p.beta1) < 1.0;
}

double sv_coupling_fourth_moment(const StochVolParams& p, std::size_t m) {
    // Validates the parameters.
    (void)ProcessSpec::stoch_vol(p.alpha, p.phi, p.sigma_w2);
    if (m < 1) throw Error(ErrorCode::InvalidSpec, "coupling depth m must be >= 1");
    const double big_v = sv_var_log_variance(p);
    const double v = std::pow(p.phi, 2.0 * static_cast<double>(m)) * big_v;
    const double scale = std::exp(2.0 * sv_mean_log_variance(p) + 2.0 * big_v);
    // 2 - 8 e^{-3v/4} + 6 e^{-v}. The constant and linear terms cancel, so
    // small v goes through the power series sum_{k>=2} (6(-1)^k - 8(-3/4)^k) v^k / k!.
    double bracket = 0.0;
    if (v < 0.05) {
        double term_a = 1.0, term_b = 1.0;  // (-v)^k / k!, (-3v/4)^k / k!
        for (int k = 1; k <= 14; ++k) {
            term_a *= -v / k;
            term_b *= -0.75 * v / k;
            if (k >= 2) bracket += 6.0 * term_a - 8.0 * term_b;
        }
    } else {
        bracket = 2.0 - 8.0 * std::exp(-0.75 * v) + 6.0 * std::exp(-v);
    }
    return std::max(0.0, scale * bracket);
}

double power_decay_tail_norm(double d, std::size_t t) {
    if (!(d > 0.5)) throw Error(ErrorCode::InvalidSpec, "tail norm needs d > 1/2");
    return std::sqrt(power_tail_sum(2.0 * d, t + 1));
}

std::size_t shift_depth(const ProcessSpec& spec) {
    switch (spec.kind()) {
        case ProcessKind::Iid: return 1;
        case ProcessKind::Linear: return spec.linear_params().coefficients.size();
        case ProcessKind::Garch11:
        case ProcessKind::StochVol: return kBurnIn;
    }
    return 1;
}

Innovation draw_innovation(const ProcessSpec& spec, RandomStream& rng) {
    Innovation inn;
    switch (spec.kind()) {
        case ProcessKind::Iid: inn.eps = std::sqrt(spec.iid_params().variance) * rng.normal(); break;
        case ProcessKind::Linear: inn.eps = std::sqrt(spec.linear_params().variance) * rng.normal(); break;
        case ProcessKind::Garch11: inn.eps = rng.normal(); break;
        case ProcessKind::StochVol:
            inn.w = std::sqrt(spec.sv_params().sigma_w2) * rng.normal();
            inn.eps = rng.normal();
            break;
    }
    return inn;
}

double evaluate_shift(const ProcessSpec& spec, std::span<const Innovation> newest_first) {
    if (newest_first.empty()) throw Error(ErrorCode::InvalidLength, "no innovations supplied");
    switch (spec.kind()) {
        case ProcessKind::Iid: return newest_first[0].eps;
        case ProcessKind::Linear: {
            const auto& psi = spec.linear_params().coefficients;
            const std::size_t terms = std::min(psi.size(), newest_first.size());
            double s = 0.0;
            for (std::size_t k = 0; k < terms; ++k) s += psi[k] * newest_first[k].eps;
            return s;
        }
        case ProcessKind::Garch11: {
            const auto& p = spec.garch_params();
            double sigma2 = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
            for (std::size_t k = newest_first.size(); k-- > 1;) {
                const double r = std::sqrt(sigma2) * newest_first[k].eps;
                sigma2 = p.alpha0 + p.alpha1 * r * r + p.beta1 * sigma2;
            }
            return std::sqrt(sigma2) * newest_first[0].eps;
        }
        case ProcessKind::StochVol: {
            const auto& p = spec.sv_params();
            double x = sv_mean_log_variance(p);
            for (std::size_t k = newest_first.size(); k-- > 0;) x = p.alpha + p.phi * x + newest_first[k].w;
            return std::exp(0.5 * x) * newest_first[0].eps;
        }
    }
    return 0.0;
}

}  // namespace lrvkit
