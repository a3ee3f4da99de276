#include "lrvkit/coupling.hpp"

#include "lrvkit/numeric.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace lrvkit;
using namespace lrvkit::testing;

TEST(Coupling, FiniteMovingAverageIgnoresOldInnovation) {
    const std::vector<std::size_t> t{1};
    const auto d = coupled_paths(ProcessSpec::linear({1.0}), t, CouplingMode::ReplaceEpsilon0, 500, 3);
    EXPECT_LE(d.estimates[0], 3.0 * d.std_errors[0]);
    EXPECT_EQ(d.fourth_moments[0], 0.0);
}

TEST(Coupling, EpsilonZeroAtLagZeroMatchesInnovationDifference) {
    // X_0 - X_0' = e_0 - e_0' ~ N(0, 2): E|.|^4 = 3 * 4 = 12
    const std::vector<std::size_t> t{0};
    const auto d = coupled_paths(ProcessSpec::iid(1.0), t, CouplingMode::ReplaceEpsilon0, 20000, 4);
    EXPECT_LT(std::abs(d.fourth_moments[0] - 12.0), 4.0 * d.fourth_moment_std_errors[0]);
}

TEST(Coupling, PowerDecayLinearSlope) {
    const double decay = 2.0;
    std::vector<std::size_t> t(64);
    std::iota(t.begin(), t.end(), std::size_t{1});
    const auto d = coupled_paths(ProcessSpec::linear_power_decay(decay), t, CouplingMode::ReplaceEpsilon0, 2000, 5);
    EXPECT_NEAR(d.decay_exponent_hat, -decay, 0.15);
    // exact L4 norm is (t+1)^-d * ||e - e'||_4 with ||e - e'||_4 = 12^(1/4)
    for (std::size_t k : {0u, 9u, 63u}) {
        const double exact = std::pow(static_cast<double>(t[k] + 1), -decay) * std::pow(12.0, 0.25);
        EXPECT_LT(std::abs(d.estimates[k] - exact), 4.0 * d.std_errors[k]) << "t=" << t[k];
    }
}

TEST(Coupling, GarchTailReplacementContracts) {
    std::vector<std::size_t> m(12);
    std::iota(m.begin(), m.end(), std::size_t{1});
    const auto d = coupled_paths(ProcessSpec::garch11(0.5, 0.2, 0.4), m, CouplingMode::ReplaceTail, 4000, 6);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < m.size(); ++k) {
        ASSERT_GT(d.estimates[k], 0.0);
        xs.push_back(static_cast<double>(m[k]));
        ys.push_back(std::log(d.estimates[k]));
    }
    // geometric contraction: log norm falls at a clearly negative linear rate
    EXPECT_LT(least_squares_slope(xs, ys), -0.1);
    EXPECT_LT(d.estimates.back(), 0.1 * d.estimates.front());
}

TEST(Coupling, ThreadCountDoesNotChangeResults) {
    const std::vector<std::size_t> t{1, 2, 4, 8};
    const auto spec = ProcessSpec::garch11(0.5, 0.2, 0.4);
    const auto a = coupled_paths(spec, t, CouplingMode::ReplaceEpsilon0, 300, 9, 1);
    const auto b = coupled_paths(spec, t, CouplingMode::ReplaceEpsilon0, 300, 9, 4);
    EXPECT_EQ(a.estimates, b.estimates);
    EXPECT_EQ(a.std_errors, b.std_errors);
}

TEST(Coupling, RejectsTooFewReps) {
    const std::vector<std::size_t> t{1};
    EXPECT_LRV_ERROR(coupled_paths(ProcessSpec::iid(1.0), t, CouplingMode::ReplaceTail, 99, 1), ErrorCode::InsufficientReps);
    EXPECT_LRV_ERROR(coupled_paths(ProcessSpec::iid(1.0), std::span<const std::size_t>{}, CouplingMode::ReplaceTail, 100, 1),
                     ErrorCode::InvalidArgument);
}
