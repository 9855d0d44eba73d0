#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lblab/approx_bounds.hpp"
#include "lblab/approx_oracle.hpp"
#include "lblab/errors.hpp"

using namespace lblab;

namespace {
const double kE2 = std::exp(2.0);
}

TEST(ChebyshevBound, SpecValues) {
    EXPECT_NEAR(chebyshev_lb_inf(2.0, 0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(chebyshev_lb_inf(2.0, 1), (2.0 - std::sqrt(3.0)) / 3.0, 1e-15);
    EXPECT_NEAR(chebyshev_lb_inf(2.0, 1), 0.089316, 1e-6);
    EXPECT_LT(chebyshev_lb_inf(1e6, 0), 1e-11);
    EXPECT_THROW(chebyshev_lb_inf(1.0, 0), DomainError);
    EXPECT_THROW(chebyshev_lb_inf(0.5, 2), DomainError);
}

TEST(MaxnormBound, SpecValues) {
    EXPECT_NEAR(maxnorm_lb(1, 4, 0, 0), 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(maxnorm_lb(1, 4, 0, 1), 1.0 / 8.0, 1e-15);
    for (int k = 0; k < 20; ++k) EXPECT_NEAR(maxnorm_lb(1, 4, 0, k + 1) / maxnorm_lb(1, 4, 0, k), 1.0 / 3.0, 1e-14);
    EXPECT_THROW(maxnorm_lb(4, 1, 0, 0), DomainError);
    EXPECT_THROW(maxnorm_lb(1, 4, -2, 0), DomainError);
}

TEST(MaxnormBound, AgreesWithChebyshevAfterAffineMap) {
    // 1/(η+c) on [a,b] under η = ((b-a)t + (b+a))/2 is (2/(b-a)) / (t - u)
    // with u = -(b+a+2c)/(b-a); the Chebyshev bound scales accordingly.
    for (auto [a, b, c] : {std::tuple{1.0, 4.0, 0.0}, {2.0, 5.0, -1.0}, {1.0, 100.0, 3.0}}) {
        const double u = (b + a + 2 * c) / (b - a);
        for (int k = 0; k <= 6; ++k)
            EXPECT_NEAR(maxnorm_lb(a, b, c, k), 2.0 / (b - a) * chebyshev_lb_inf(u, k),
                        1e-13 * maxnorm_lb(a, b, c, 0));
    }
}

TEST(L1Bound, SpecValues) {
    EXPECT_NEAR(l1_lb(4, 1, 2.5, 0), 1.0, 1e-15);
    EXPECT_NEAR(l1_lb(4, 1, 2.5, 1), 1.0 / 3.0, 1e-15);
    EXPECT_LT(l1_lb(4, 1, 1e6, 1), 1e-6);
    EXPECT_GE(std::log(4.0), l1_lb(4, 1, 2.5, 0));
    EXPECT_THROW(l1_lb(4, 1, 1.0, 1), DomainError);
}

TEST(WeightedL2, SpecValues) {
    EXPECT_NEAR(l2_weighted_lb(-0.5, 0), 1.0 / (8.0 * kE2), 1e-15);
    EXPECT_NEAR(l2_weighted_lb(-0.5, 0), 0.016917, 1e-6);
    EXPECT_NEAR(l2_weighted_lb(-0.9, 0), 1.0 / (kE2 * std::pow(2.0, 2.2)), 1e-15);
    EXPECT_NEAR(l2_weighted_lb(-0.9, 0), 0.02945, 1e-5);
    EXPECT_NEAR(l2_weighted_lb(-0.5, 4), 1.0 / (kE2 * 216.0), 1e-15);
    EXPECT_NEAR(l2_weighted_exact(-0.5, 0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(l2_weighted_exact(-0.5, 1), 1.5 * (4.0 / 9.0) / 6.25, 1e-15);
    EXPECT_NEAR(l2_weighted_exact(-0.5, 1), 0.10667, 1e-5);
}

TEST(WeightedL2, ExactIsStrictlyDecreasingAndAboveBound) {
    for (double alpha : {-0.9, -0.5, -0.1}) {
        EXPECT_NEAR(l2_weighted_exact(alpha, 0), 1.0 / (alpha + 2.0), 1e-15);
        for (int k = 0; k <= 12; ++k) {
            EXPECT_GE(l2_weighted_exact(alpha, k), l2_weighted_lb(alpha, k));
            if (k > 0) { EXPECT_LT(l2_weighted_exact(alpha, k), l2_weighted_exact(alpha, k - 1)); }
        }
    }
}

TEST(RateEnvelope, FsmReducesToSingleFunctionRatio) {
    for (double kappa : {2.0, 10.0, 100.0})
        for (int k = 0; k <= 10; ++k) {
            const double r = (std::sqrt(kappa) - 1) / (std::sqrt(kappa) + 1);
            EXPECT_NEAR(fsm_rate_envelope(kappa, 1, k, 3.0), 3.0 * std::pow(r, k), 1e-13);
        }
}

TEST(RateEnvelope, KappaOneIsZeroAfterStart) {
    EXPECT_EQ(fsm_rate_envelope(1.0, 5, 0, 2.0), 2.0);
    for (int k = 1; k < 5; ++k) EXPECT_EQ(fsm_rate_envelope(1.0, 5, k, 2.0), 0.0);
    EXPECT_EQ(fsm_value_envelope(1.0, 1.0, 1.0, 8, 3), 0.0);
}

TEST(RateEnvelope, SqrtTwoArithmetic) {
    EXPECT_NEAR(fsm_rate_envelope(101, 100, 100, 1.0), 3.0 - 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(fsm_rate_envelope(101, 100, 100, 1.0), 0.17157, 1e-5);
}

TEST(RateEnvelope, ValueFormIsHalfMuTimesSquaredDistance) {
    const double L = 100, mu = 1, R = 1;
    const int n = 8;
    const double pre = n * R * mu / (std::sqrt(2.0) * (L - mu));
    for (int k = 0; k <= 50; k += 7) {
        const double dist = fsm_rate_envelope(L / mu, n, k, pre);
        EXPECT_NEAR(fsm_value_envelope(L, mu, R, n, k), 0.5 * mu * dist * dist, 1e-15);
    }
}

TEST(RateEnvelope, RlmRatio) {
    const double lambda = 0.01;
    const int n = 100;
    const double s = std::sqrt(2.0 / (lambda * n) + 1.0);
    EXPECT_NEAR(rlm_ratio(lambda, n), (s - 1) / (s + 1), 1e-15);
    EXPECT_NEAR(rlm_distance_envelope(lambda, n, 50), 0.5 * std::pow((s - 1) / (s + 1), 1.0), 1e-15);
}

TEST(IterationBound, SpecValues) {
    EXPECT_NEAR(iteration_lb_from_rate(4, 1, 0, 1, std::exp(-2.0)), std::sqrt(3.0), 1e-14);
    EXPECT_EQ(iteration_lb_from_rate(4, 1, 0, 0.5, 0.5), 0.0);
    EXPECT_EQ(iteration_lb_from_rate(4, 1, 0, 0.5, 0.9), 0.0);
}

TEST(IterationBound, MonotoneProperty) {
    double prev = 0.0;
    for (double eps = 1e-1; eps > 1e-12; eps /= 10) {
        const double v = iteration_lb_from_rate(10, 1, 0.5, 1, eps);
        EXPECT_GT(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (double L : {2.0, 4.0, 16.0, 100.0}) {
        const double v = iteration_lb_from_rate(L, 1, 0.5, 1, 1e-6);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(TheoremBounds, SmoothPlugIn) {
    ProblemParams p;
    p.L = 1;
    p.R = 1;
    p.alpha = -0.5;
    p.eps = 1.0 / (kE2 * 216.0);
    const auto b = theorem_bounds(p, TheoremKind::smooth);
    // (L R² (α+1) / (e² ε))^(1/(2α+4)) - 2 = 108^(1/3) - 2
    EXPECT_NEAR(b.value, std::cbrt(108.0) - 2.0, 1e-12);
    EXPECT_NEAR(smooth_bound_delta_form(1.0, p.delta(), *p.eps), std::pow(216.0 * kE2, 1.0 / 3.0), 1e-9);
}

TEST(TheoremBounds, FsmCountArmDominates) {
    ProblemParams p;
    p.n = 1000;
    p.eps = 0.5;
    p.L = 2;
    p.mu = 1;
    p.R = 1;
    const auto b = theorem_bounds(p, TheoremKind::fsm);
    EXPECT_EQ(b.value, 1000.0);
    ASSERT_TRUE(b.count_arm);
    EXPECT_LT(b.rate_arm, 1000.0);
}

TEST(TheoremBounds, RlmRateArm) {
    ProblemParams p;
    p.n = 100;
    p.lambda = 0.01;
    // ln(n²λ²/8) + ln(1/ε) = 1
    p.eps = std::exp(-1.0) / 8.0;
    const auto b = theorem_bounds(p, TheoremKind::rlm);
    EXPECT_NEAR(b.rate_arm, std::sqrt(20000.0) / 8.0, 1e-12);
    EXPECT_NEAR(b.rate_arm, 17.68, 5e-3);
    EXPECT_EQ(b.value, 50.0);
}

TEST(TheoremBounds, ClampsNegative) {
    ProblemParams p;
    p.L = 4;
    p.mu = 1;
    p.R = 1;
    p.eps = 10.0;
    const auto b = theorem_bounds(p, TheoremKind::toy);
    EXPECT_LT(b.raw, 0.0);
    EXPECT_EQ(b.value, 0.0);
}

TEST(TheoremBounds, MissingParameter) {
    ProblemParams p;
    p.L = 4;
    EXPECT_THROW(theorem_bounds(p, TheoremKind::toy), std::invalid_argument);
    EXPECT_THROW(theorem_kind_from_string("nope"), std::invalid_argument);
}

TEST(Identities, TechnicalOne) {
    EXPECT_NEAR(identity_checks(1.25, {}).technical1_residual, 0.0, 1e-15);
    for (double u : {1.1, 1.25, 2.0, 10.0, 1e6}) EXPECT_LE(identity_checks(u, {}).technical1_residual, 1e-12) << u;
    EXPECT_THROW(identity_checks(1.0, {}), DomainError);
}

TEST(Identities, SignIntegral) {
    for (double u : {1.5, 2.0, 5.0}) {
        const auto rep = identity_checks(u, {1, 2, 3, 4, 5, 6});
        for (const auto& row : rep.integral_rows) EXPECT_LE(row.residual, 1e-6) << u << " k=" << row.k;
    }
    // k = 1 by hand: ∫ 1/(2-η) over [-1,1] = ln 3 = 2 ln((z+1)/(z-1)) at z = 2+√3
    const auto rep = identity_checks(2.0, {1});
    EXPECT_NEAR(rep.integral_rows[0].numeric, std::log(3.0), 1e-12);
}

TEST(Sandwich, BoundsBelowBruteForceOptima) {
    for (int k = 0; k <= 6; ++k) {
        const auto u = best_uniform([](double x) { return 1.0 / x; }, 1, 4, k);
        EXPECT_GE(u.error * (1 + 1e-9), maxnorm_lb(1, 4, 0, k)) << k;
        const auto l1 = best_l1([](double x) { return 1.0 / (x + 2.5); }, -1.5, 1.5, k);
        EXPECT_GE(l1.error * (1 + 1e-9), l1_lb(4, 1, 2.5, k)) << k;
        const auto l2 = best_weighted_l2(-0.5, k);
        EXPECT_GE(l2.error * (1 + 1e-9), l2_weighted_lb(-0.5, k)) << k;
    }
}
