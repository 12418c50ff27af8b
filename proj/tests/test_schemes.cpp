#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "irrsde/brownian.hpp"
#include "irrsde/schemes.hpp"
#include "irrsde/transform.hpp"

namespace irrsde {
namespace {

using testing::constant;

IncrementArray zero_increments(std::size_t n, double T) {
    IncrementArray a;
    a.base_steps = n;
    a.horizon = T;
    a.values.assign(n, 0.0);
    return a;
}

TEST(TameDriftTest, Examples) {
    EXPECT_EQ(tame_drift(0.0, 0.01), 0.0);
    EXPECT_EQ(tame_drift(10.0, 0.1), 5.0);
    const double r = tame_drift(-1e9, 1e-3);
    EXPECT_NEAR(r, -999.999, 1e-3);
    EXPECT_LE(std::abs(r), 1000.0);
}

TEST(TameDriftTest, RejectsStepOutsideUnitInterval) {
    EXPECT_THROW(tame_drift(1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(tame_drift(1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(tame_drift(1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(tame_drift(1.0, -0.1), std::invalid_argument);
}

TEST(TameDriftTest, BoundsSignAndMonotonicityRandom) {
    std::mt19937_64 rng(20241);
    std::uniform_real_distribution<double> log_mag(-10.0, 12.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t violations = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double mu = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, log_mag(rng));
        double delta = unit(rng);
        if (delta == 0.0) delta = 0.5;
        const double t = tame_drift(mu, delta);
        if (!(std::abs(t) <= std::min(1.0 / delta, std::abs(mu)))) ++violations;
        if (std::signbit(t) != std::signbit(mu)) ++violations;
        // strictly increasing; once delta |mu| is huge the value saturates at
        // 1/delta in floating point, so only non-decrease is checked there
        const double bigger = mu + std::abs(mu) * 1e-6;
        const double tb = tame_drift(bigger, delta);
        if (delta * std::abs(mu) < 1e3 ? !(tb > t) : !(tb >= t)) ++violations;
    }
    EXPECT_EQ(violations, 0u);
}

TEST(TameDriftTest, CombinedBoundForCubicJumpDrift) {
    // |mu(x)| <= (1 + |x|)^3 for the cubic+jump drift; below the step size
    // floor delta_min the constant max(1, delta_min^{-1/2}) suffices.
    const auto p = testing::cubic_jump_problem();
    const double delta_min = std::ldexp(1.0, -14);
    const double c = std::max(1.0, 1.0 / std::sqrt(delta_min));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> xs(-200.0, 200.0);
    std::uniform_real_distribution<double> levels(1.0, 14.0);
    for (int i = 0; i < 200000; ++i) {
        const double x = xs(rng);
        const double delta = std::exp2(-levels(rng));
        const double mu = p.drift(x);
        const double lhs = std::abs(tame_drift(mu, delta));
        const double rhs = c * std::min((1.0 + std::abs(x)) / std::sqrt(delta), std::abs(mu));
        ASSERT_LE(lhs, rhs * (1.0 + 1e-12)) << "x = " << x << " delta = " << delta;
    }
}

TEST(TamedStepTest, Examples) {
    const auto cubic = testing::cubic_problem(0.0, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(tamed_em_step(cubic, 2.0, 0.5, 0.0), 1.2);
    const auto frozen = testing::frozen_problem();
    for (double x : {-3.0, 0.0, 7.5}) EXPECT_EQ(tamed_em_step(frozen, x, 0.1, 0.8), x);
    EXPECT_EQ(tamed_em_step(testing::brownian_problem(), 0.0, 0.1, 0.3), 0.3);
}

TEST(SimulateTest, SingleStepMatchesStep) {
    const auto p = testing::cubic_jump_problem(0.7, 0.5);
    auto incr = generate_increments({1, 2}, 0, 1, 0.5);
    const auto sol = simulate_tamed_em(p, incr);
    ASSERT_EQ(sol.values.size(), 2u);
    EXPECT_EQ(sol.values[0], 0.7);
    EXPECT_EQ(sol.values[1], tamed_em_step(p, 0.7, 0.5, incr.values[0]));
    EXPECT_FALSE(sol.overflowed);
}

TEST(SimulateTest, ConstantPathWithoutDrift) {
    const SdeProblem p(constant(0.0), constant(1.0), 2.5, 1.0);
    const auto sol = simulate_tamed_em(p, zero_increments(64, 1.0));
    for (double v : sol.values) EXPECT_EQ(v, 2.5);
    EXPECT_EQ(sol.steps(), 64u);
    EXPECT_EQ(sol.delta, 1.0 / 64.0);
}

TEST(SimulateTest, DeterministicCubicMatchesOde) {
    const auto p = testing::cubic_problem(1.0, 0.0, 1.0);
    const auto sol = simulate_tamed_em(p, zero_increments(1u << 14, 1.0));
    EXPECT_NEAR(sol.values.back(), testing::cubic_ode_solution(1.0, 1.0), 2e-3);
    EXPECT_NEAR(sol.values.back(), 1.0 / std::sqrt(3.0), 2e-3);
}

TEST(SimulateTest, RecursionHoldsAtEveryStep) {
    const auto p = testing::cubic_jump_problem();
    const auto incr = generate_increments({4, 4}, 6, 1, 1.0);
    const auto sol = simulate_tamed_em(p, incr);
    for (std::size_t j = 0; j < incr.steps(); ++j) {
        ASSERT_EQ(sol.values[j + 1], tamed_em_step(p, sol.values[j], sol.delta, incr.values[j]));
    }
}

TEST(UntamedTest, AgreesWithTamedForLipschitzDrift) {
    const auto p = testing::lipschitz_problem();
    const auto incr = generate_increments({12345, 0}, 10, 1, 1.0);
    const auto tamed = simulate_tamed_em(p, incr);
    const auto plain = simulate_untamed_em(p, incr);
    EXPECT_LE(std::abs(tamed.values.back() - plain.values.back()), 0.01);
    EXPECT_FALSE(plain.overflowed);
}

TEST(UntamedTest, BlowsUpForCubicDrift) {
    const auto p = testing::cubic_problem(3.0, 0.0, 25.0);
    const auto sol = simulate_untamed_em(p, zero_increments(100, 25.0));
    EXPECT_EQ(sol.values[1], -3.75);
    EXPECT_NEAR(sol.values[2], -3.75 + std::pow(3.75, 3) * 0.25, 1e-12);
    EXPECT_TRUE(sol.overflowed);
    EXPECT_EQ(std::abs(sol.values.back()), kOverflowThreshold);
    for (double v : sol.values) EXPECT_TRUE(std::isfinite(v));
    // frozen from the clamp on
    const auto first = std::find_if(sol.values.begin(), sol.values.end(),
                                    [](double v) { return std::abs(v) == kOverflowThreshold; });
    for (auto it = first; it != sol.values.end(); ++it) EXPECT_EQ(*it, *first);

    const auto tamed = simulate_tamed_em(p, zero_increments(100, 25.0));
    EXPECT_FALSE(tamed.overflowed);
}

TEST(UntamedTest, IdenticalToTamedWithoutDrift) {
    const SdeProblem p(constant(0.0), PiecewisePolynomial::single(Polynomial{{1.0, 0.2}}), 0.3, 1.0);
    const auto incr = generate_increments({8, 1}, 7, 1, 1.0);
    EXPECT_EQ(simulate_tamed_em(p, incr).values, simulate_untamed_em(p, incr).values);
}

TEST(UntamedTest, RejectsStepSizeOne) {
    EXPECT_THROW(simulate_untamed_em(testing::lipschitz_problem(), zero_increments(1, 1.0)), std::invalid_argument);
    EXPECT_THROW(simulate_tamed_em(testing::lipschitz_problem(), zero_increments(1, 2.0)), std::invalid_argument);
}

TEST(FineGridTest, FactorOneKeepsValues) {
    const auto p = testing::cubic_jump_problem();
    const auto incr = generate_increments({1, 1}, 5, 1, 1.0);
    const auto sol = simulate_tamed_em(p, incr);
    EXPECT_EQ(evaluate_on_fine_grid(sol, p, incr), sol.values);
}

TEST(FineGridTest, SubsampledEqualsCoarseBitwise) {
    const auto p = testing::cubic_jump_problem();
    const auto fine = generate_increments({3, 9}, 10, 1, 1.0);
    for (std::size_t f : {2u, 8u, 64u}) {
        const auto coarse = simulate_tamed_em(p, coarsen(fine, f));
        const auto values = evaluate_on_fine_grid(coarse, p, fine);
        ASSERT_EQ(values.size(), fine.steps() + 1);
        for (std::size_t k = 0; k <= coarse.steps(); ++k) ASSERT_EQ(values[k * f], coarse.values[k]);
    }
}

TEST(FineGridTest, BrownianMatchesIncrementSums) {
    const auto p = testing::brownian_problem(0.4);
    const auto fine = generate_increments({6, 0}, 9, 1, 1.0);
    const std::size_t f = 16;
    const auto coarse = simulate_tamed_em(p, coarsen(fine, f));
    const auto values = evaluate_on_fine_grid(coarse, p, fine);
    for (std::size_t j = 0; j < fine.steps(); ++j) {
        const std::size_t k = j / f;
        const double w = std::accumulate(fine.values.begin() + static_cast<std::ptrdiff_t>(k * f),
                                         fine.values.begin() + static_cast<std::ptrdiff_t>(j), 0.0);
        ASSERT_NEAR(values[j], coarse.values[k] + w, 1e-13);
    }
}

TEST(FineGridTest, InterpolationFormula) {
    const auto p = testing::cubic_jump_problem();
    const auto fine = generate_increments({2, 2}, 6, 1, 1.0);
    const auto coarse = simulate_tamed_em(p, coarsen(fine, 4));
    const auto values = evaluate_on_fine_grid(coarse, p, fine);
    const double x = coarse.values[3];
    const double expected = x + tame_drift(p.drift(x), coarse.delta) * (2.0 * fine.step_size()) +
                            p.diffusion(x) * (fine.values[12] + fine.values[13]);
    EXPECT_NEAR(values[14], expected, 1e-14);
}

TEST(FineGridTest, NonNestedGridsRejected) {
    const auto p = testing::lipschitz_problem();
    const auto coarse = simulate_tamed_em(p, zero_increments(4, 1.0));
    EXPECT_THROW(evaluate_on_fine_grid(coarse, p, zero_increments(6, 1.0)), std::invalid_argument);
    EXPECT_THROW(evaluate_on_fine_grid(coarse, p, zero_increments(12, 1.0)), std::invalid_argument);
    EXPECT_NO_THROW(evaluate_on_fine_grid(coarse, p, zero_increments(16, 1.0)));
}

TEST(TransformedSchemeTest, IdentityTransformMatchesTamed) {
    const auto p = testing::lipschitz_problem();
    const TransformedCoefficients tc(p, TransformG::build(p));
    const auto incr = generate_increments({5, 5}, 8, 1, 1.0);
    EXPECT_EQ(simulate_transformed_tamed_em(tc, p.x0(), incr).values, simulate_tamed_em(p, incr).values);
}

TEST(TransformedSchemeTest, SingleStepByHand) {
    const auto p = testing::cubic_jump_problem(0.03);
    const auto g = TransformG::build(p);
    const TransformedCoefficients tc(p, g);
    const double x0 = 0.03;
    const double z0 = g(x0);
    // mu~(z0) = G'(x0) mu(x0) + G''(x0) sigma^2 / 2, sigma~(z0) = G'(x0) sigma
    const double mu_t = g.first_derivative(x0) * p.drift(x0) + 0.5 * g.second_derivative(x0);
    const double sigma_t = g.first_derivative(x0);
    EXPECT_NEAR(tc.drift(z0), mu_t, 1e-10);
    EXPECT_NEAR(tc.diffusion(z0), sigma_t, 1e-12);

    const auto incr = generate_increments({7, 0}, 4, 1, 1.0);
    IncrementArray one = incr;
    one.values.resize(1);
    one.horizon = incr.step_size();
    const auto sol = simulate_transformed_tamed_em(tc, z0, one);
    const double delta = incr.step_size();
    EXPECT_NEAR(sol.values[1], z0 + mu_t / (1.0 + delta * std::abs(mu_t)) * delta + sigma_t * incr.values[0], 1e-10);
}

TEST(TransformedSchemeTest, NoiseAtBreakpointIsNonzero) {
    const auto p = testing::cubic_jump_problem();
    const auto g = TransformG::build(p);
    ASSERT_TRUE(transform_selfcheck(p, g).all_pass());
    const TransformedCoefficients tc(p, g);
    EXPECT_NE(tc.diffusion(g(0.0)), 0.0);
}

}  // namespace
}  // namespace irrsde
