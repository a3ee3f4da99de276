#include "lrvkit/process.hpp"

#include "lrvkit/numeric.hpp"
#include "lrvkit/spectral.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace lrvkit;
using namespace lrvkit::testing;

namespace {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const double> x) {
    const auto s = summarize(x);
    return {s.mean, s.variance};
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
    const double mu = mean(x);
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        den += (x[i] - mu) * (x[i] - mu);
        if (i + lag < x.size()) num += (x[i] - mu) * (x[i + lag] - mu);
    }
    return static_cast<double>(num / den);
}

}  // namespace

TEST(Simulate, IidMoments) {
    const std::size_t n = 100000;
    const auto x = simulate(ProcessSpec::iid(1.0), n, 1);
    ASSERT_EQ(x.size(), n);
    const auto m = moments(x.values());
    EXPECT_LT(std::abs(m.mean), 3.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(m.variance, 1.0, 0.05);
}

TEST(Simulate, GarchMomentsAndWhiteNoise) {
    const std::size_t n = 100000;
    const auto spec = ProcessSpec::garch11(0.5, 0.2, 0.4);
    const auto x = simulate(spec, n, 2);
    EXPECT_NEAR(moments(x.values()).variance, 1.25, 0.05 * 1.25);
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t lag = 1; lag <= 5; ++lag) EXPECT_LT(std::abs(autocorrelation(x.values(), lag)), bound) << lag;
    // squares are autocorrelated: the volatility is not constant
    std::vector<double> sq(x.values().begin(), x.values().end());
    for (auto& v : sq) v *= v;
    EXPECT_GT(autocorrelation(sq, 1), 0.1);
}

TEST(Simulate, StochVolMomentsAndWhiteNoise) {
    const std::size_t n = 100000;
    const auto x = simulate(ProcessSpec::stoch_vol(0.0, 0.5, 1.0), n, 3);
    EXPECT_NEAR(moments(x.values()).variance, std::exp(2.0 / 3.0), 0.05 * std::exp(2.0 / 3.0));
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t lag = 1; lag <= 5; ++lag) EXPECT_LT(std::abs(autocorrelation(x.values(), lag)), bound) << lag;
}

TEST(Simulate, LinearMovingAverageAutocovariance) {
    const std::size_t n = 200000;
    const auto spec = ProcessSpec::linear({1.0, 0.5}, 2.0);
    const auto x = simulate(spec, n, 4);
    const auto g = sample_autocovariances(x.demeaned(), 3);
    EXPECT_NEAR(g[0], 2.0 * 1.25, 0.05);
    EXPECT_NEAR(g[1], 2.0 * 0.5, 0.05);
    EXPECT_NEAR(g[2], 0.0, 0.05);
    EXPECT_DOUBLE_EQ(theoretical_autocovariance(spec, 1), 1.0);
    EXPECT_DOUBLE_EQ(theoretical_autocovariance(spec, -1), 1.0);
    EXPECT_DOUBLE_EQ(theoretical_autocovariance(spec, 2), 0.0);
}

TEST(Simulate, LongLinearUsesEquivalentConvolution) {
    // n * J large enough to take the transform route; compare with a direct sum.
    const auto spec = ProcessSpec::linear_power_decay(1.6);
    const auto& psi = spec.linear_params().coefficients;
    ASSERT_GT(psi.size(), 1000u);
    const auto x = simulate(spec, 30000, 5);
    EXPECT_EQ(x.size(), 30000u);
    const auto m = moments(x.values());
    double var = 0.0;
    for (double p : psi) var += p * p;
    EXPECT_NEAR(m.variance, var, 0.1 * var);
}

TEST(Simulate, DeterministicInSeed) {
    for (const auto& spec : {ProcessSpec::iid(2.0), ProcessSpec::garch11(0.5, 0.2, 0.4),
                             ProcessSpec::stoch_vol(0.1, 0.5, 1.0), ProcessSpec::linear_power_decay(2.0)}) {
        const auto a = simulate(spec, 500, 77);
        const auto b = simulate(spec, 500, 77);
        const auto c = simulate(spec, 500, 78);
        ASSERT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin())) << spec.describe();
        EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
    }
}

TEST(ProcessSpec, RejectsInvalidParameters) {
    EXPECT_LRV_ERROR(ProcessSpec::iid(0.0), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::iid(-1.0), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::garch11(0.0, 0.2, 0.4), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::garch11(0.5, 0.6, 0.4), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::garch11(0.5, -0.1, 0.4), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::stoch_vol(0.0, 1.0, 1.0), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::stoch_vol(0.0, 0.5, 0.0), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::linear({}, 1.0), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(ProcessSpec::linear_power_decay(0.4), ErrorCode::InvalidSpec);
    EXPECT_LRV_ERROR(simulate(ProcessSpec::iid(1.0), 0, 1), ErrorCode::InvalidLength);
}

TEST(ProcessSpec, PowerDecayTruncation) {
    const auto spec = ProcessSpec::linear_power_decay(2.0);
    const auto& psi = spec.linear_params().coefficients;
    ASSERT_TRUE(spec.linear_params().decay.has_value());
    EXPECT_EQ(psi[0], 1.0);
    EXPECT_DOUBLE_EQ(psi[3], std::pow(4.0, -2.0));
    // cut where the remaining l2 mass drops below 1e-8 of the total
    const double total = std::pow(kPi, 4) / 90.0;
    const double tail = power_decay_tail_norm(2.0, psi.size());
    EXPECT_LT(tail * tail, kLinearTailTolerance * total);
    const double tail_before = power_decay_tail_norm(2.0, psi.size() - 1);
    EXPECT_GE(tail_before * tail_before, kLinearTailTolerance * total);
    EXPECT_LE(psi.size(), kLinearMaxTerms);
}

TEST(TheoreticalF0, Examples) {
    EXPECT_NEAR(theoretical_f0(ProcessSpec::iid(1.0)), 1.0 / kTwoPi, 1e-15);
    EXPECT_NEAR(theoretical_f0(ProcessSpec::garch11(0.5, 0.2, 0.4)), 1.25 / kTwoPi, 1e-15);
    EXPECT_NEAR(theoretical_f0(ProcessSpec::linear({1.0}, 1.0)), 1.0 / kTwoPi, 1e-15);
    EXPECT_NEAR(theoretical_f0(ProcessSpec::linear({1.0, 0.5}, 2.0)), 2.0 * 2.25 / kTwoPi, 1e-15);
    const double mu = 0.2 / 0.5, var_x = 1.0 / 0.75;
    EXPECT_NEAR(theoretical_f0(ProcessSpec::stoch_vol(0.2, 0.5, 1.0)), std::exp(mu + var_x / 2) / kTwoPi, 1e-14);
    EXPECT_NEAR(stationary_variance(ProcessSpec::stoch_vol(0.0, 0.5, 1.0)), std::exp(2.0 / 3.0), 1e-14);
}

TEST(GarchFourthMoment, Check) {
    EXPECT_NEAR(garch_fourth_moment_factor(0.2, 0.4), 0.44, 1e-15);
    EXPECT_TRUE(garch_fourth_moment_check({0.5, 0.2, 0.4}));
    EXPECT_NEAR(garch_fourth_moment_factor(0.5, 0.5), 1.5, 1e-15);
    EXPECT_FALSE(garch_fourth_moment_check({0.5, 0.5, 0.5}));
    EXPECT_EQ(garch_fourth_moment_factor(0.0, 0.0), 0.0);
    EXPECT_TRUE(garch_fourth_moment_check({0.5, 0.0, 0.0}));
}

TEST(SvCouplingMoment, NoPersistenceIsZero) {
    for (std::size_t m : {1u, 2u, 5u}) EXPECT_EQ(sv_coupling_fourth_moment({0.3, 0.0, 1.0}, m), 0.0);
}

TEST(SvCouplingMoment, MatchesMonteCarlo) {
    // Independent oracle: run the log-variance recursion m steps from two
    // independent stationary starting points with shared shocks.
    const StochVolParams p{0.0, 0.5, 1.0};
    const double big_v = p.sigma_w2 / (1 - p.phi * p.phi);
    for (std::size_t m : {1u, 2u, 3u}) {
        RandomStream rng(1000 + m);
        std::vector<double> draws(200000);
        for (auto& d : draws) {
            double x = std::sqrt(big_v) * rng.normal();
            double y = std::sqrt(big_v) * rng.normal();
            for (std::size_t k = 0; k < m; ++k) {
                const double w = std::sqrt(p.sigma_w2) * rng.normal();
                x = p.phi * x + w;
                y = p.phi * y + w;
            }
            d = std::pow(std::exp(x / 2) - std::exp(y / 2), 4);
        }
        const auto [mc, se] = mean_with_std_error(draws);
        EXPECT_LT(std::abs(sv_coupling_fourth_moment(p, m) - mc), 4.0 * se) << "m=" << m;
    }
}

TEST(SvCouplingMoment, GeometricRatio) {
    const StochVolParams p{0.0, 0.5, 1.0};
    const double ratio = sv_coupling_fourth_moment(p, 11) / sv_coupling_fourth_moment(p, 10);
    EXPECT_NEAR(ratio, 0.0625, 0.01);
    EXPECT_GT(sv_coupling_fourth_moment(p, 30), 0.0);
    EXPECT_LRV_ERROR(sv_coupling_fourth_moment(p, 0), ErrorCode::InvalidSpec);
}

TEST(PowerDecayTail, Asymptotics) {
    for (double d : {1.6, 2.0, 3.0}) {
        const std::size_t t = 1000;
        const double approx = std::pow(static_cast<double>(t), 0.5 - d) / std::sqrt(2 * d - 1);
        const double exact = power_decay_tail_norm(d, t);
        if (d >= 2.0) {
            // independent direct sum; the neglected remainder is below 1e-9 relative
            long double s = 0.0L;
            for (std::size_t j = t; j < 2'000'000; ++j) s += std::pow(static_cast<long double>(j + 1), -2.0L * d);
            EXPECT_NEAR(exact, std::sqrt(static_cast<double>(s)), 1e-6 * exact);
        }
        EXPECT_GE(exact / approx, 0.95);
        EXPECT_LE(exact / approx, 1.05);
    }
}
