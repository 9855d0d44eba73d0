#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "lblab/approx_bounds.hpp"
#include "lblab/approx_oracle.hpp"
#include "lblab/harness.hpp"
#include "lblab/symbolic_trace.hpp"

namespace lblab::harness {

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

Outcome expect(bool ok, const std::string& detail) { return {ok, detail}; }

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// ---------------------------------------------------------------- polynomials

Outcome chebyshev_sign_orthogonality() {
    double worst = 0.0;
    for (std::size_t k = 1; k <= 10; ++k)
        for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, sgn_orthogonality_residual(k, j));
    return expect(worst <= 1e-10, "max residual " + sci(worst));
}

Outcome chebyshev_zeros() {
    double worst = 0.0;
    for (std::size_t k = 1; k <= 12; ++k) {
        const auto u = chebyshev_U(k);
        for (double z : chebyshev_U_zeros(k)) worst = std::max(worst, std::abs(u.eval(z)));
    }
    return expect(worst <= 1e-9, "max |U_k(zero)| " + sci(worst));
}

Outcome multipoly_ring_laws() {
    const auto x = MultiPoly::variable(3, 0), y = MultiPoly::variable(3, 1), z = MultiPoly::variable(3, 2);
    const auto a = x * y + MultiPoly::constant(3, Rational(1, 3));
    const auto b = y - z * z;
    const auto c = x + z * Rational(7, 2);
    const bool distrib = a * (b + c) == a * b + a * c;
    const bool assoc = (a * b) * c == a * (b * c);
    const bool degree = (a * b).total_degree() == Degree(4);
    return expect(distrib && assoc && degree, "distributivity, associativity, degree of product");
}

// ---------------------------------------------------------------- approx_bounds

Outcome technical_identity() {
    double worst = 0.0;
    for (double u : {1.1, 1.25, 2.0, 10.0, 1e6}) worst = std::max(worst, identity_checks(u, {}).technical1_residual);
    return expect(worst <= 1e-12, "max residual " + sci(worst));
}

Outcome integral_identity() {
    double worst = 0.0;
    for (double u : {1.5, 2.0, 5.0})
        for (const auto& row : identity_checks(u, {1, 2, 3, 4, 5, 6}).integral_rows)
            worst = std::max(worst, row.residual);
    return expect(worst <= 1e-6, "max residual " + sci(worst));
}

Outcome l2_exact_formula() {
    double worst = 0.0;
    for (double alpha : {-0.9, -0.5, -0.1})
        for (int k = 0; k <= 8; ++k) {
            const double a = l2_weighted_exact(alpha, k), b = best_weighted_l2(alpha, k).error;
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
    return expect(worst <= 1e-9, "max relative gap " + sci(worst));
}

// ---------------------------------------------------------------- approx_oracle

using MaxnormBound = std::function<double(double, double, double, int)>;

Outcome uniform_sandwich(const MaxnormBound& bound) {
    double worst = INFINITY;
    for (auto [lo, hi, c] : {std::tuple{1.0, 4.0, 0.0}, {2.0, 5.0, -1.0}})
        for (int k = 0; k <= 6; ++k) {
            const double shift = c;
            const double err = best_uniform([shift](double x) { return 1.0 / (x + shift); }, lo, hi, k, 2049).error;
            worst = std::min(worst, err / bound(lo, hi, c, k));
        }
    return expect(worst >= 1.0 - 1e-9, "min ratio error/bound " + sci(worst));
}

Outcome l1_sandwich() {
    double worst = INFINITY;
    for (int k = 0; k <= 6; ++k) {
        const double err = best_l1([](double x) { return 1.0 / (x + 2.5); }, -1.5, 1.5, k, 4097).error;
        worst = std::min(worst, err / l1_lb(4.0, 1.0, 2.5, k));
    }
    return expect(worst >= 1.0 - 1e-9, "min ratio error/bound " + sci(worst));
}

Outcome l2_sandwich() {
    double worst = INFINITY;
    for (double alpha : {-0.9, -0.5, -0.1})
        for (int k = 0; k <= 8; ++k) worst = std::min(worst, best_weighted_l2(alpha, k).error / l2_weighted_lb(alpha, k));
    return expect(worst >= 1.0 - 1e-9, "min ratio error/bound " + sci(worst));
}

// ---------------------------------------------------------------- instances

Outcome fsm_spectrum() {
    FamilySpec s;
    s.kind = FamilyKind::fsm;
    s.n = 4;
    s.d = 4;
    s.mu = 1;
    s.L = 100;
    double worst = 0.0;
    for (const auto& g : family_grid(s, 9)) {
        const auto inst = make_instance(s, g.params);
        for (std::size_t j = 0; j < inst.n(); ++j) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.dense_component(j));
            worst = std::max(worst, std::max(s.mu - es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff() - s.L));
        }
    }
    return expect(worst <= 1e-12, "max spectral excess " + sci(worst));
}

Outcome fsm_minimizer_solve() {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-49.5, 49.5);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> etas(5);
        for (auto& e : etas) e = u(gen);
        const auto inst = fsm_instance(etas, 100, 1, 1, 4);
        const Eigen::VectorXd direct = inst.dense_hessian().ldlt().solve(inst.mean_linear_term());
        const Eigen::Map<const Eigen::VectorXd> w(inst.minimizer.data(), inst.minimizer.size());
        worst = std::max(worst, (direct - w).norm() / direct.norm());
    }
    return expect(worst <= 1e-10, "max relative gap " + sci(worst));
}

Outcome separations() {
    const double fsm = fsm_minimizer_separation(8, 100, 1);
    const double rlm = rlm_minimizer_separation(0.01, 100);
    const bool ok = fsm >= 0.2 && std::abs(rlm - 2 * std::sqrt(2.0) / 3.0) <= 1e-12;
    return expect(ok, "fsm " + sci(fsm) + ", rlm " + sci(rlm));
}

Outcome rlm_minimizer_solve() {
    const std::vector<double> psis{0.3, -1.1, 1.5, 0.0};
    const auto r = rlm_instance(psis, 0.05, 8);
    const Eigen::VectorXd direct = r.dual.dense_hessian().ldlt().solve(r.dual.mean_linear_term());
    const Eigen::Map<const Eigen::VectorXd> a(r.dual.minimizer.data(), r.dual.minimizer.size());
    const double gap = (direct - a).norm() / direct.norm();
    return expect(gap <= 1e-10, "relative gap " + sci(gap));
}

Outcome chain_spectrum() {
    const auto inst = nesterov_chain(50, 100, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.dense_hessian());
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    return expect(std::abs(lo - 1) <= 1e-9 && std::abs(hi - 100) <= 1e-9, "spectrum [" + sci(lo) + ", " + sci(hi) + "]");
}

// ---------------------------------------------------------------- optimizers

Outcome gd_toy_sandwich(const MaxnormBound& bound) {
    FamilySpec s;
    s.kind = FamilyKind::toy;
    s.mu = 1;
    s.L = 4;
    OptimizerParams p;
    p.L = 4;
    p.mu = 1;
    p.n = 1;
    const auto curve = expected_error_curve(make_optimizer("gd", p), s, family_grid(s, 33), 100, 1,
                                            ErrorMeasure::distance);
    const double kappa = 4.0;
    std::size_t bad = 0;
    for (std::size_t k = 0; k <= 100; ++k) {
        const double worst = curve.points[k].mean;
        const double upper = std::pow(1.0 - 2.0 / (1.0 + kappa), k / 2.0) / s.mu;
        if (worst < bound(1, 4, 0, static_cast<int>(k)) - 1e-9 || worst > upper + 1e-9) ++bad;
    }
    return expect(bad == 0, std::to_string(bad) + " iterations outside the sandwich");
}

Outcome oblivious_audit() {
    const auto inst = fsm_instance({-10, 5, 40}, 100, 1, 1, 4);
    auto p = params_for(inst);
    std::string bad;
    for (const auto& name : optimizer_names()) {
        if (name == "sdca" || name == "lbfgs") continue;
        if (!audit_obliviousness(make_optimizer(name, p), inst, 30, 3)) bad += name + " ";
    }
    const bool lbfgs_flagged = !audit_obliviousness(make_optimizer("lbfgs", p), inst, 10, 0);
    return expect(bad.empty() && lbfgs_flagged, bad.empty() ? "lbfgs flagged as adaptive" : "stream changed: " + bad);
}

// ---------------------------------------------------------------- symbolic_trace

Outcome gd_closed_form() {
    for (int L : {1, 4, 10})
        for (std::size_t k = 0; k <= 12; ++k)
            if (!(trace_gd_toy(k, L) == gd_toy_closed_form(k, L)))
                return expect(false, "mismatch at L=" + std::to_string(L) + " k=" + std::to_string(k));
    return expect(true, "k <= 12, L in {1,4,10}");
}

Outcome degree_lemmas() {
    FamilySpec fsm;
    fsm.kind = FamilyKind::fsm;
    fsm.n = 3;
    fsm.d = 4;
    fsm.mu = 1;
    fsm.L = 100;
    OptimizerParams p;
    p.L = 100;
    p.mu = 1;
    p.n = 3;
    p.d = 4;
    std::size_t traces = 0;
    for (const char* name : {"gd", "agd", "hb", "sgd", "sag", "saga", "svrg", "sdca_primal", "cd_cyclic", "cd_random"})
        for (std::uint64_t seed = 0; seed < 2; ++seed, ++traces) trace_oblivious(make_optimizer(name, p), fsm, 8, seed);

    FamilySpec smooth;
    smooth.kind = FamilyKind::smooth;
    smooth.L = 4;
    smooth.d = 3;
    OptimizerParams q;
    q.L = 4;
    q.mu = 0.5;
    q.n = 1;
    for (const char* name : {"gd", "agd", "sgd", "svrg"}) {
        trace_oblivious(make_optimizer(name, q), smooth, 8, 0);
        ++traces;
    }

    FamilySpec rlm;
    rlm.kind = FamilyKind::rlm;
    rlm.n = 100;
    rlm.lambda = 0.01;
    OptimizerParams r;
    r.n = 100;
    r.family = OracleFamily::dual;
    for (std::uint64_t seed = 0; seed < 3; ++seed, ++traces) trace_oblivious(make_optimizer("sdca", r), rlm, 10, seed);
    return expect(true, std::to_string(traces) + " traces within budget");
}

Outcome symbolic_numeric_agreement() {
    FamilySpec fsm;
    fsm.kind = FamilyKind::fsm;
    fsm.n = 3;
    fsm.d = 4;
    fsm.mu = 1;
    fsm.L = 100;
    OptimizerParams p;
    p.L = 100;
    p.mu = 1;
    p.n = 3;
    p.d = 4;
    const std::vector<double> etas{-0.5, 12.25, -40.0};
    double worst = 0.0;
    for (const char* name : {"sag", "svrg", "cd_random"}) {
        const auto sched = make_optimizer(name, p);
        const auto tr = trace_oblivious(sched, fsm, 8, 11);
        const auto inst = make_instance(fsm, etas);
        CliExecutor<double> ex(inst.model, sched.tracked);
        CounterRng rng(11, sched.name);
        auto gen = sched.make_generator();
        for (std::size_t k = 0; k < 8; ++k) ex.apply(gen(k, rng));
        const auto sym = evaluate_trace(tr.points[0], FamilyKind::fsm, etas);
        for (std::size_t i = 0; i < sym.size(); ++i) worst = std::max(worst, std::abs(sym[i] - ex.point(0)[i]));
    }
    return expect(worst <= 1e-9, "max gap " + sci(worst));
}

Outcome fig2_ordering() {
    const auto t = fig2_data(4, 1, 4, 1025);
    double gd = 0, agd = 0;
    for (std::size_t r = 0; r < t.eta.size(); ++r) {
        gd = std::max(gd, std::abs(t.gd[3][r] - t.target[r]));
        agd = std::max(agd, std::abs(t.agd[3][r] - t.target[r]));
    }
    return expect(agd <= gd, "sup error gd " + sci(gd) + ", agd " + sci(agd));
}

}  // namespace

std::vector<CheckResult> property_suite(const VerifyOptions& options) {
    if (!options.mutate.empty() && options.mutate != "maxnorm-prefactor")
        throw ConfigError("verify-all: unknown mutation '" + options.mutate + "'");
    const double factor = options.mutate == "maxnorm-prefactor" ? 10.0 : 1.0;
    const MaxnormBound bound = [factor](double a, double b, double c, int k) { return factor * maxnorm_lb(a, b, c, k); };

    const std::vector<std::tuple<std::string, std::string, std::function<Outcome()>>> checks{
        {"polynomials", "sign pattern of U_k is orthogonal to lower degrees", chebyshev_sign_orthogonality},
        {"polynomials", "U_k vanishes at its listed zeros", chebyshev_zeros},
        {"polynomials", "multivariate ring laws", multipoly_ring_laws},
        {"approx_bounds", "technical identity residual", technical_identity},
        {"approx_bounds", "integral identity vs quadrature", integral_identity},
        {"approx_bounds", "weighted L2 closed form vs normal equations", l2_exact_formula},
        {"approx_oracle", "uniform sandwich", [&] { return uniform_sandwich(bound); }},
        {"approx_oracle", "L1 sandwich", l1_sandwich},
        {"approx_oracle", "weighted L2 sandwich", l2_sandwich},
        {"instances", "fsm component spectra in [mu, L]", fsm_spectrum},
        {"instances", "fsm minimizer vs dense solve", fsm_minimizer_solve},
        {"instances", "rlm dual minimizer vs dense solve", rlm_minimizer_solve},
        {"instances", "minimizer separations", separations},
        {"instances", "chain spectrum is [mu, L]", chain_spectrum},
        {"optimizers", "gd toy sandwich", [&] { return gd_toy_sandwich(bound); }},
        {"optimizers", "oblivious schedules ignore answers", oblivious_audit},
        {"symbolic_trace", "gd toy trace matches binomial form", gd_closed_form},
        {"symbolic_trace", "degree budgets", degree_lemmas},
        {"symbolic_trace", "symbolic and numeric runs agree", symbolic_numeric_agreement},
        {"symbolic_trace", "AGD beats GD at k=4", fig2_ordering},
    };

    std::vector<CheckResult> results;
    for (const auto& [module, name, fn] : checks) {
        CheckResult r{module, name, false, 0.0, ""};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto o = fn();
            r.passed = o.ok;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

int cmd_verify_all(const VerifyOptions& options, std::ostream& out) {
    const auto results = property_suite(options);
    const std::string hash = options.mutate.empty() ? "none" : "mutation:" + options.mutate;
    CsvTable table({"module", "check", "status", "seconds", "detail"}, "seconds = wall time", hash);
    std::map<std::string, std::pair<int, int>> per_module;
    bool ok = true;
    for (const auto& r : results) {
        std::string detail = r.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        table.add_row(std::vector<std::string>{r.module, r.name, r.passed ? "PASS" : "FAIL", format_double(r.seconds),
                                               detail});
        auto& [pass, fail] = per_module[r.module];
        (r.passed ? pass : fail) += 1;
        ok = ok && r.passed;
    }
    out << table.str();
    CsvTable counts({"module", "passed", "failed"}, "check counts", hash);
    for (const auto& [m, pf] : per_module)
        counts.add_row(std::vector<std::string>{m, std::to_string(pf.first), std::to_string(pf.second)});
    out << counts.str();
    for (const auto& r : results)
        if (!r.passed) out << "FAILED: " << r.module << ": " << r.name << "\n";
    return ok ? kOk : kFailure;
}

}  // namespace lblab::harness
