#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lblab/errors.hpp"
#include "lblab/instances.hpp"

using namespace lblab;

namespace {

Eigen::VectorXd dense_minimizer(const QuadraticInstance& inst) {
    return inst.dense_hessian().ldlt().solve(inst.mean_linear_term());
}

Eigen::VectorXd as_vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

}  // namespace

TEST(Toy, MinimizerAndValue) {
    const auto inst = toy_instance(2.0, 1.0, 4.0);
    EXPECT_DOUBLE_EQ(inst.minimizer[0], 0.5);
    EXPECT_DOUBLE_EQ(inst.objective(inst.minimizer), -0.25);
    EXPECT_DOUBLE_EQ(inst.optimal_value, -0.25);
    EXPECT_EQ(inst.gradient(inst.minimizer)[0], 0.0);
    EXPECT_DOUBLE_EQ(toy_instance(1.0, 1.0, 4.0).minimizer[0], 1.0);
    EXPECT_THROW(toy_instance(5.0, 1.0, 4.0), DomainError);
}

TEST(Fsm, BlockEigenvaluesWithinStrongConvexityAndSmoothness) {
    const double L = 100, mu = 1, half = (L - mu) / 2;
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> eta(-half, half);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> etas(6);
        for (auto& e : etas) e = eta(gen);
        const auto inst = fsm_instance(etas, L, mu, 1.0, 5);
        for (std::size_t j = 0; j < etas.size(); ++j) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.dense_component(j));
            const auto ev = es.eigenvalues();
            EXPECT_GE(ev.minCoeff(), mu - 1e-12);
            EXPECT_LE(ev.maxCoeff(), L + 1e-12);
            EXPECT_NEAR(ev.maxCoeff(), (L + mu) / 2 + std::abs(etas[j]), 1e-10);
        }
        const Eigen::VectorXd direct = dense_minimizer(inst);
        EXPECT_LE((direct - as_vec(inst.minimizer)).norm(), 1e-10 * direct.norm());
    }
}

TEST(Fsm, MinimizerSpecialCases) {
    const double L = 10, mu = 2, R = 3, half = (L - mu) / 2;
    auto w = fsm_minimizer(std::vector<double>(4, -half), L, mu, R, 4);
    EXPECT_NEAR(w[0], R / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(w[1], R / std::sqrt(2.0), 1e-14);
    EXPECT_EQ(w[2], 0.0);
    w = fsm_minimizer(std::vector<double>(4, 0.0), L, mu, R, 4);
    EXPECT_NEAR(w[0], R * mu * std::sqrt(2.0) / (L + mu), 1e-14);
    w = fsm_minimizer({half}, L, mu, R, 2);
    EXPECT_NEAR(w[0], R * mu / (std::sqrt(2.0) * L), 1e-14);
    EXPECT_THROW(fsm_instance({half * 1.01}, L, mu, R, 4), DomainError);
    EXPECT_THROW(fsm_instance({0.0}, L, mu, R, 1), DomainError);
}

TEST(Fsm, SeparationMatchesMinimizers) {
    // Oracle: the two extreme parameter vectors differing in one coordinate.
    const double L = 100, mu = 1, R = 1, half = (L - mu) / 2;
    const std::size_t n = 8;
    std::vector<double> lo(n, -half), hi(n, -half);
    hi[0] = half;
    const double direct = (as_vec(fsm_minimizer(lo, L, mu, R, 4)) - as_vec(fsm_minimizer(hi, L, mu, R, 4))).norm();
    const double sep = fsm_minimizer_separation(n, L / mu, R);
    EXPECT_NEAR(sep, direct, 1e-14);
    EXPECT_NEAR(sep, 2.0 / std::abs(8.0 * 101.0 / 99.0 - 6.0), 1e-14);
    EXPECT_NEAR(sep, 0.9246, 1e-3);
    EXPECT_GE(sep, 0.2);
}

TEST(Fsm, SeparationAsymptoteAndDomain) {
    for (std::size_t n : {1u, 4u, 8u, 50u}) {
        // The floor 2R/(n+2) is reached as κ → 3; for large κ the separation tends to R.
        EXPECT_NEAR(fsm_minimizer_separation(n, 3.0 + 1e-12, 1.0), 2.0 / (n + 2.0), 1e-9);
        EXPECT_NEAR(fsm_minimizer_separation(n, 1e12, 1.0), 1.0, 1e-9);
        EXPECT_NEAR(fsm_minimizer_separation(n, 50.0, 1.0), 49.0 / (n + 49.0), 1e-14);
        for (double kappa : {3.5, 10.0, 1e3}) EXPECT_GE(fsm_minimizer_separation(n, kappa, 1.0), 2.0 / (n + 2.0));
    }
    EXPECT_THROW(fsm_minimizer_separation(8, 3.0, 1.0), DomainError);
}

TEST(Smooth, MinimizerIndependentOfParameter) {
    for (double eta : {0.01, 0.5, 1.0, 2.0}) {
        const auto inst = smooth_instance(eta, 2.0, 1.5, 3);
        EXPECT_EQ(inst.minimizer, (std::vector<double>{1.5, 0.0, 0.0}));
        EXPECT_DOUBLE_EQ(inst.objective(inst.minimizer), -1.5 * 1.5 * eta / 2);
        const auto g = inst.gradient({0, 0, 0});
        EXPECT_DOUBLE_EQ(g[0], -1.5 * eta);
        EXPECT_LE((dense_minimizer(inst) - as_vec(inst.minimizer)).norm(), 1e-12);
    }
    EXPECT_THROW(smooth_instance(0.0, 1.0, 1.0, 2), DomainError);
}

TEST(Rlm, DataAndDualStructure) {
    const std::size_t n = 6;
    const double lambda = 0.1;
    const std::vector<double> psis{0.3, -1.2, std::numbers::pi / 2};
    const auto r = rlm_instance(psis, lambda, n);
    for (const auto& x : r.data) EXPECT_NEAR(x.norm(), 1.0, 1e-15);
    // Dual Hessian equals (I + Gram/(λn))/n.
    Eigen::MatrixXd X(n, n);
    for (std::size_t i = 0; i < n; ++i) X.col(i) = r.data[i];
    const Eigen::MatrixXd Q = (Eigen::MatrixXd::Identity(n, n) + X.transpose() * X / (lambda * n)) / n;
    EXPECT_LE((r.dual.dense_hessian() - Q).norm(), 1e-14);
    const Eigen::VectorXd direct = Q.ldlt().solve(Eigen::VectorXd::Constant(n, 1.0 / n));
    EXPECT_LE((direct - as_vec(r.dual.minimizer)).norm(), 1e-10 * direct.norm());
    EXPECT_THROW(rlm_instance({0.0}, lambda, 3), DomainError);
}

TEST(Rlm, ZeroAngleIsDiagonal) {
    const auto r = rlm_instance(std::vector<double>(50, 0.0), 0.01, 100);
    const auto H = r.dual.dense_hessian();
    EXPECT_TRUE(H.isDiagonal());
    EXPECT_NEAR(H(0, 0), (1 + 1 / (0.01 * 100)) / 100, 1e-15);
    for (double a : r.dual.minimizer) EXPECT_NEAR(a, 0.5, 1e-15);
}

TEST(Rlm, RightAngleMinimizer) {
    const double lambda = 0.02;
    const std::size_t n = 10;
    std::vector<double> psis(n / 2, 0.0);
    psis[2] = std::numbers::pi / 2;
    const auto a = rlm_dual_minimizer(psis, lambda, n);
    EXPECT_NEAR(a[4], lambda * n / (lambda * n + 2), 1e-15);
    EXPECT_NEAR(a[5], lambda * n / (lambda * n + 2), 1e-15);
}

TEST(Rlm, Separation) {
    EXPECT_NEAR(rlm_minimizer_separation(0.01, 100), 2 * std::sqrt(2.0) / 3, 1e-14);
    EXPECT_NEAR(rlm_minimizer_separation(0.01, 100), 0.9428, 1e-4);
    for (auto [lambda, n] : {std::pair{0.1, std::size_t{4}}, {0.5, std::size_t{20}}, {0.003, std::size_t{200}}})
        EXPECT_NEAR(rlm_minimizer_separation(lambda, n), 2 * std::sqrt(2.0) / (lambda * n + 2), 1e-14);
}

TEST(Rlm, WeakDualityAndZeroGapAtOptimum) {
    const std::size_t n = 8;
    const double lambda = 0.05;
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<double> psis(n / 2);
    for (auto& p : psis) p = u(gen);
    const auto r = rlm_instance(psis, lambda, n);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd w(n);
        std::vector<double> alpha(n);
        for (std::size_t i = 0; i < n; ++i) {
            w(i) = u(gen);
            alpha[i] = u(gen);
        }
        EXPECT_GE(r.primal_objective(w), -r.dual_objective(alpha) - 1e-12);
    }
    const auto& a = r.dual.minimizer;
    EXPECT_NEAR(r.primal_objective(r.primal_from_dual(a)), -r.dual_objective(a), 1e-12);
}

TEST(Chain, ConditionedExactlyAndTridiagonal) {
    const auto inst = nesterov_chain(50, 100.0, 1.0);
    const auto H = inst.dense_hessian();
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
            if (std::abs(i - j) > 1) { EXPECT_EQ(H(i, j), 0.0); }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    EXPECT_NEAR(es.eigenvalues().minCoeff(), 1.0, 1e-9);
    EXPECT_NEAR(es.eigenvalues().maxCoeff(), 100.0, 1e-9);
    EXPECT_LE((dense_minimizer(inst) - as_vec(inst.minimizer)).norm(), 1e-9 * as_vec(inst.minimizer).norm());
    EXPECT_THROW(nesterov_chain(1, 10, 1), DomainError);
}

TEST(Chain, GradientDescentRateIsLinear) {
    const auto inst = nesterov_chain(30, 10.0, 1.0);
    std::vector<double> w(30, 0.0);
    std::vector<double> errs;
    for (int k = 0; k < 200; ++k) {
        const auto g = inst.gradient(w);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= g[i] / 10.0;
        errs.push_back(inst.suboptimality(w));
    }
    // Every eigen-direction contracts by (1 - λ/L)² ≤ (1 - 1/κ)², and the
    // slowest one dominates late, so the measured ratio sits just below it.
    const double ratio = std::pow(errs[199] / errs[99], 1.0 / 100);
    EXPECT_LE(ratio, std::pow(1 - 1.0 / 10.0, 2) + 1e-9);
    EXPECT_GE(ratio, 0.75);
}

TEST(Families, GridAndInstances) {
    FamilySpec fsm{FamilyKind::fsm, 1, 100, 1, 0.01, 8, 4};
    const auto grid = family_grid(fsm, 17);
    EXPECT_EQ(grid.size(), 1 + 8 * 16u);
    for (const auto& g : grid) EXPECT_NO_THROW(make_instance(fsm, g.params));
    FamilySpec toy{FamilyKind::toy, 1, 4};
    const auto tg = family_grid(toy, 33);
    EXPECT_EQ(tg.front().value, 1.0);
    EXPECT_EQ(tg.back().value, 4.0);
    EXPECT_THROW(family_grid(toy, 0), DomainError);
    EXPECT_THROW(family_from_string("bogus"), std::invalid_argument);
    EXPECT_EQ(family_from_string(to_string(FamilyKind::rlm)), FamilyKind::rlm);
}

TEST(Families, LiftAgreesWithConcreteInstances) {
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    const auto lifted = lift_family(fsm);
    const std::vector<double> params{-2.0, 0.5, 4.5};
    const auto inst = make_instance(fsm, params);
    std::vector<Rational> at;
    for (double p : params) at.push_back(to_rational(p));
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_EQ(to_double(lifted.components[j].Q.diag[i].eval(at)), inst.model.components[j].Q.diag[i]);
            if (i < 3) { EXPECT_EQ(to_double(lifted.components[j].Q.off[i].eval(at)), inst.model.components[j].Q.off[i]); }
            EXPECT_EQ(to_double(lifted.components[j].q[i].eval(at)), inst.model.components[j].q[i]);
        }
}

TEST(Describe, JsonNamesFamily) {
    const auto s = toy_instance(2, 1, 4).describe_json();
    EXPECT_NE(s.find("\"family\":\"toy\""), std::string::npos);
}
