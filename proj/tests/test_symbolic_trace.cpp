#include <cmath>

#include <gtest/gtest.h>

#include "lblab/approx_bounds.hpp"
#include "lblab/errors.hpp"
#include "lblab/symbolic_trace.hpp"

using namespace lblab;

namespace {

Rational binomial(std::size_t n, std::size_t k) {
    Rational r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

OptimizerParams params(const FamilySpec& f) {
    OptimizerParams p;
    p.L = f.L;
    p.mu = f.mu;
    p.n = f.kind == FamilyKind::rlm ? f.n : (f.kind == FamilyKind::fsm ? f.n : 1);
    p.d = f.d;
    p.family = f.oracle_family();
    if (f.kind == FamilyKind::rlm) {
        const double nn = static_cast<double>(f.n);
        p.mu = 1.0 / nn;
        p.L = (1.0 + 2.0 / (f.lambda * nn)) / nn;
    }
    if (f.kind == FamilyKind::smooth) p.mu = f.L / 10;
    return p;
}

}  // namespace

TEST(GdToy, LowOrderClosedForms) {
    const Rational L(4);
    EXPECT_EQ(trace_gd_toy(0, L), UniPoly());
    EXPECT_EQ(trace_gd_toy(1, L), UniPoly::constant(Rational(1) / L));
    EXPECT_EQ(trace_gd_toy(2, L), UniPoly({Rational(2) / L, Rational(-1) / (L * L)}));
    EXPECT_EQ(trace_gd_toy(3, L), UniPoly({Rational(3) / L, Rational(-3) / (L * L), Rational(1) / (L * L * L)}));
}

TEST(GdToy, MatchesBinomialSumExactly) {
    for (int Li : {1, 4, 10}) {
        const Rational L(Li);
        for (std::size_t k = 0; k <= 12; ++k) {
            // Independent expansion of (1/L) Σ (-1)^i C(k, i+1) (η/L)^i.
            std::vector<Rational> c;
            Rational Lpow = L;
            for (std::size_t i = 0; i < k; ++i) {
                c.push_back((i % 2 ? Rational(-1) : Rational(1)) * binomial(k, i + 1) / Lpow);
                Lpow *= L;
            }
            EXPECT_EQ(trace_gd_toy(k, L), UniPoly(c)) << "L=" << Li << " k=" << k;
            EXPECT_EQ(gd_toy_closed_form(k, L), UniPoly(c));
        }
    }
}

TEST(GdToy, EvaluatesLikeSpecExample) {
    EXPECT_EQ(trace_gd_toy(2, Rational(1)).eval(Rational(1)), Rational(1));
}

TEST(Oblivious, GdOnToyEqualsDirectTrace) {
    FamilySpec toy{FamilyKind::toy, 1, 4};
    const auto tr = trace_oblivious(make_optimizer("gd", params(toy)), toy, 8, 0);
    for (std::size_t k = 0; k <= 8; ++k)
        EXPECT_EQ(tr.history[k].entries[0].to_uni(), trace_gd_toy(k, Rational(4))) << k;
}

TEST(Oblivious, ZeroStepsGiveZeroPolynomials) {
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    const auto tr = trace_oblivious(make_optimizer("sag", params(fsm)), fsm, 0, 0);
    for (const auto& p : tr.points)
        for (const auto& e : p.entries) EXPECT_TRUE(e.is_zero());
}

TEST(Oblivious, FsmTotalDegreeWithinStepCount) {
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    for (const char* name : {"gd", "sgd", "sag", "svrg", "cd_cyclic"}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto tr = trace_oblivious(make_optimizer(name, params(fsm)), fsm, 10, seed);
            for (std::size_t k = 0; k <= 10; ++k) EXPECT_LE(tr.history[k].max_total_degree(), Degree(static_cast<int>(k))) << name;
        }
    }
}

TEST(Oblivious, SgdSpecExample) {
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    const auto tr = trace_oblivious(make_optimizer("sgd", params(fsm)), fsm, 5, 42);
    EXPECT_LE(tr.points[0].max_total_degree(), Degree(5));
}

TEST(Oblivious, SmoothConstantTermVanishes) {
    FamilySpec smooth{FamilyKind::smooth, 0.1, 2.0, 1.0, 0.01, 1, 3};
    for (const char* name : {"gd", "sgd", "sag", "svrg"}) {
        const auto tr = trace_oblivious(make_optimizer(name, params(smooth)), smooth, 8, 1);
        for (const auto& h : tr.history)
            for (const auto& e : h.entries) EXPECT_EQ(e.constant_term(), 0) << name;
    }
}

TEST(Oblivious, RlmDegreeSumOnLongCycles) {
    FamilySpec rlm{FamilyKind::rlm, 1, 1, 1, 0.01, 100, 1};
    for (const char* name : {"sdca", "cd_cyclic", "cd_random"})
        for (std::uint64_t seed = 0; seed < 3; ++seed)
            EXPECT_NO_THROW(trace_oblivious(make_optimizer(name, params(rlm)), rlm, 10, seed)) << name;
}

TEST(Oblivious, RlmDegreeSumFailsWhenOnePairIsRevisited) {
    // Alternating exact steps on one coupled pair raise each coordinate's
    // degree past the other's: degrees (2, 3) after four steps.
    FamilySpec rlm{FamilyKind::rlm, 1, 1, 1, 0.1, 2, 1};
    EXPECT_NO_THROW(trace_oblivious(make_optimizer("cd_cyclic", params(rlm)), rlm, 3, 0));
    EXPECT_THROW(trace_oblivious(make_optimizer("cd_cyclic", params(rlm)), rlm, 4, 0), InvariantViolation);
}

TEST(Oblivious, RefusesAdaptiveAndMismatchedSchedules) {
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    EXPECT_THROW(trace_oblivious(make_optimizer("lbfgs", params(fsm)), fsm, 2, 0), std::invalid_argument);
    EXPECT_THROW(trace_oblivious(make_optimizer("sdca", params(fsm)), fsm, 2, 0), IncompatibleOracle);
}

TEST(Budget, CheckerFlagsViolations) {
    const auto x = MultiPoly::variable(1, 0);
    EXPECT_THROW(check_degree_budget(PolyVector{{x * x}, 1}, FamilyKind::fsm, 1), InvariantViolation);
    EXPECT_THROW(check_degree_budget(PolyVector{{x + MultiPoly::constant(1, 1)}, 1}, FamilyKind::smooth, 1),
                 InvariantViolation);
    EXPECT_NO_THROW(check_degree_budget(PolyVector{{x}, 1}, FamilyKind::smooth, 1));
}

TEST(Consistency, SymbolicEvaluationMatchesNumericRun) {
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    const std::vector<double> at{-4.5, 0.25, 3.0};
    const auto inst = make_instance(fsm, at);
    for (const char* name : {"gd", "agd", "sgd", "sag", "saga", "svrg", "sdca_primal", "cd_random"}) {
        const auto s = make_optimizer(name, params(fsm));
        const auto tr = trace_oblivious(s, fsm, 7, 3);
        CliExecutor<double> ex(inst.model, s.tracked);
        CounterRng rng(3, s.name);
        auto gen = s.make_generator();
        for (std::size_t k = 0; k < 7; ++k) ex.apply(gen(k, rng));
        const auto sym = evaluate_trace(tr.points[0], FamilyKind::fsm, at);
        for (std::size_t i = 0; i < sym.size(); ++i) EXPECT_NEAR(sym[i], ex.point(0)[i], 1e-9) << name;
    }
}

TEST(Consistency, RlmTracesEvaluateThroughSine) {
    FamilySpec rlm{FamilyKind::rlm, 1, 1, 1, 0.1, 4, 1};
    const std::vector<double> psis{0.7, -1.2};
    const auto s = make_optimizer("sdca", params(rlm));
    const auto tr = trace_oblivious(s, rlm, 2, 5);
    const auto rec_inst = make_instance(rlm, psis);
    CliExecutor<double> ex(rec_inst.model, 1);
    CounterRng rng(5, s.name);
    auto gen = s.make_generator();
    for (std::size_t k = 0; k < 2; ++k) ex.apply(gen(k, rng));
    const auto sym = evaluate_trace(tr.points[0], FamilyKind::rlm, psis);
    for (std::size_t i = 0; i < sym.size(); ++i) EXPECT_NEAR(sym[i], ex.point(0)[i], 1e-12);
}

TEST(SupError, GdToyAboveUniformBound) {
    FamilySpec toy{FamilyKind::toy, 1, 4};
    const auto grid = family_grid(toy, 1025);
    for (std::size_t k = 0; k <= 10; ++k) {
        const auto tr = trace_oblivious(make_optimizer("gd", params(toy)), toy, k, 0);
        EXPECT_GE(trace_sup_error(tr.points[0], toy, grid), maxnorm_lb(1, 4, 0, static_cast<int>(k))) << k;
    }
    const auto agd = trace_oblivious(make_optimizer("agd", params(toy)), toy, 10, 0);
    for (std::size_t k = 0; k <= 10; ++k)
        EXPECT_GE(trace_sup_error(agd.history[k], toy, grid), maxnorm_lb(1, 4, 0, static_cast<int>(k))) << k;
}

TEST(SupError, ExactMinimizerGivesZero) {
    // The smooth family's minimizer R e₁ is constant, hence a polynomial.
    FamilySpec smooth{FamilyKind::smooth, 0.1, 2.0, 1.5, 0.01, 1, 2};
    PolyVector exact{{MultiPoly::constant(1, Rational(3, 2)), MultiPoly(1)}, 0};
    EXPECT_EQ(trace_sup_error(exact, smooth, family_grid(smooth, 9)), 0.0);
    EXPECT_THROW(trace_sup_error(exact, smooth, {}), DomainError);
}

TEST(Fig2, AcceleratedApproximatesReciprocalBetter) {
    const auto t = fig2_data(4, 1);
    ASSERT_EQ(t.eta.size(), 1025u);
    double gd = 0, agd = 0;
    for (std::size_t r = 0; r < t.eta.size(); ++r) {
        EXPECT_EQ(t.target[r], 1.0 / t.eta[r]);
        EXPECT_DOUBLE_EQ(t.gd[0][r], 0.25);
        gd = std::max(gd, std::abs(t.gd[3][r] - t.target[r]));
        agd = std::max(agd, std::abs(t.agd[3][r] - t.target[r]));
    }
    EXPECT_LE(agd, gd);
    const auto csv = t.csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "eta,gd_k1,gd_k2,gd_k3,gd_k4,agd_k1,agd_k2,agd_k3,agd_k4,target");
}
