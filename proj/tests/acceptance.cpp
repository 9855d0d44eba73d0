// Acceptance suite: one PASS/FAIL line per criterion. Reference values are
// computed here from first principles where the library would otherwise be
// checking itself.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lblab/approx_bounds.hpp"
#include "lblab/approx_oracle.hpp"
#include "lblab/instances.hpp"
#include "lblab/optimizers.hpp"
#include "lblab/polynomials.hpp"
#include "lblab/symbolic_trace.hpp"

using namespace lblab;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;
};

Rational binomial(std::size_t n, std::size_t k) {
    Rational r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double rel_excess(double bound, double value) { return (bound - value) / std::max(std::abs(bound), 1e-300); }

// ---------------------------------------------------------------- 1
Verdict gd_trace_exact() {
    int mismatches = 0;
    for (int Li : {1, 4, 10}) {
        const Rational L(Li);
        for (std::size_t k = 0; k <= 12; ++k) {
            std::vector<Rational> c;
            Rational Lpow = L;
            for (std::size_t i = 0; i < k; ++i) {
                c.push_back((i % 2 ? Rational(-1) : Rational(1)) * binomial(k, i + 1) / Lpow);
                Lpow *= L;
            }
            if (!(trace_gd_toy(k, L) == UniPoly(c))) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " coefficient mismatches over 39 cases"};
}

// ---------------------------------------------------------------- 2
Verdict bound_sandwiches() {
    int violations = 0, cases = 0;
    double worst = -INFINITY;
    auto check = [&](double bound, double value) {
        ++cases;
        const double ex = rel_excess(bound, value);
        worst = std::max(worst, ex);
        if (ex > 1e-9) ++violations;
    };
    for (auto [a, b, c] : {std::tuple{1.0, 4.0, 0.0}, {1.0, 10.0, 0.0}, {1.0, 100.0, 0.0}, {2.0, 5.0, -1.0}})
        for (int k = 0; k <= 8; ++k)
            check(maxnorm_lb(a, b, c, k), best_uniform([c = c](double x) { return 1.0 / (x + c); }, a, b, k).error);
    for (auto [L, mu, alpha] : {std::tuple{4.0, 1.0, 2.5}, {3.0, 1.0, 2.0}, {10.0, 1.0, 5.5}, {100.0, 1.0, 57.5}}) {
        const double h = (L - mu) / 2;
        for (int k = 0; k <= 8; ++k)
            check(l1_lb(L, mu, alpha, k),
                  best_l1([alpha = alpha](double x) { return 1.0 / (x + alpha); }, -h, h, k).error);
    }
    for (double alpha : {-0.9, -0.5, -0.1})
        for (int k = 0; k <= 8; ++k) check(l2_weighted_lb(alpha, k), best_weighted_l2(alpha, k).error);
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(cases) +
                                 " cases; largest relative excess " + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------- 3
double normal_equation_value(double alpha_d, int k) {
    const Rational alpha = to_rational(alpha_d), two(2);
    const Rational total = Rational(1) / (alpha + two);
    if (k == 0) return to_double(total);
    std::vector<std::vector<Rational>> G(k, std::vector<Rational>(k + 1));
    for (int i = 1; i <= k; ++i) {
        for (int j = 1; j <= k; ++j) G[i - 1][j - 1] = Rational(1) / (Rational(i + j) + alpha + two);
        G[i - 1][k] = Rational(1) / (Rational(i) + alpha + two);
    }
    for (int c = 0; c < k; ++c)
        for (int r = c + 1; r < k; ++r) {
            const Rational f = G[r][c] / G[c][c];
            for (int j = c; j <= k; ++j) G[r][j] -= f * G[c][j];
        }
    std::vector<Rational> x(k);
    for (int r = k - 1; r >= 0; --r) {
        Rational s = G[r][k];
        for (int j = r + 1; j < k; ++j) s -= G[r][j] * x[j];
        x[r] = s / G[r][r];
    }
    Rational bx = 0;
    for (int i = 1; i <= k; ++i) bx += x[i - 1] / (Rational(i) + alpha + two);
    return to_double(total - bx);
}

Verdict exact_l2() {
    double worst = 0.0;
    bool ok = true;
    for (double alpha : {-0.9, -0.5, -0.1}) {
        for (int k = 0; k <= 8; ++k) worst = std::max(worst, std::abs(l2_weighted_exact(alpha, k) - normal_equation_value(alpha, k)));
        ok = ok && std::abs(l2_weighted_exact(alpha, 0) - 1.0 / (alpha + 2.0)) <= 1e-15;
    }
    const double spot = l2_weighted_exact(-0.5, 1);
    ok = ok && worst <= 1e-9 && std::abs(spot - 0.10667) <= 5e-6;
    return {ok, fmt("max |closed - normal equations| = %.3g; alpha=-0.5 k=1 -> %.6f", worst, spot)};
}

// ---------------------------------------------------------------- 4
Verdict toy_sandwich() {
    const double mu = 1, L = 4, kappa = L / mu;
    FamilySpec toy{FamilyKind::toy, mu, L};
    OptimizerParams p;
    p.L = L;
    p.mu = mu;
    p.n = 1;
    const auto curve = expected_error_curve(make_optimizer("gd", p), toy, family_grid(toy, 33), 100, 1,
                                            ErrorMeasure::distance);
    int below = 0, above = 0;
    for (std::size_t k = 0; k <= 100; ++k) {
        const double worst = curve.points[k].mean;
        const double lower = 3.0 / 8.0 * std::pow(1.0 / 3.0, static_cast<double>(k));  // maxnorm bound on [1,4]
        const double upper = std::pow(1.0 - 2.0 / (1.0 + kappa), k / 2.0) / mu;
        if (worst < lower - 1e-9) ++below;
        if (worst > upper + 1e-9) ++above;
        if (std::abs(lower - maxnorm_lb(mu, L, 0, static_cast<int>(k))) > 1e-15) ++below;
    }
    return {below == 0 && above == 0,
            std::to_string(below) + " steps below the lower bound, " + std::to_string(above) + " above the guarantee"};
}

// ---------------------------------------------------------------- 5
Verdict fig2() {
    const auto t = fig2_data(4, 1, 4, 1025);
    double gd = 0, agd = 0;
    for (std::size_t r = 0; r < t.eta.size(); ++r) {
        gd = std::max(gd, std::abs(t.gd[3][r] - 1.0 / t.eta[r]));
        agd = std::max(agd, std::abs(t.agd[3][r] - 1.0 / t.eta[r]));
    }
    return {agd <= gd && t.eta.size() == 1025, fmt("k=4 sup error: gd %.4g, agd %.4g", gd, agd)};
}

// ---------------------------------------------------------------- 6
Verdict fsm_envelope() {
    const std::size_t n = 8, d = 4, K = 200, seeds = 100;
    const double mu = 1, kappa = 100, L = kappa * mu, R = 1;
    FamilySpec fsm{FamilyKind::fsm, mu, L, R, 0.01, n, d};
    const auto grid = family_grid(fsm, 17);
    OptimizerParams p;
    p.L = L;
    p.mu = mu;
    p.n = n;
    p.d = d;
    const double nn = static_cast<double>(n);
    const double r = std::sqrt(1.0 + (kappa - 1.0) / nn);
    const double ratio = (r - 1.0) / (r + 1.0);
    const double pre = nn * R * mu / (std::sqrt(2.0) * (L - mu));
    std::string detail;
    bool ok = true;
    for (const char* name : {"sag", "saga", "svrg", "sdca_primal", "cd_random"}) {
        const auto curve = expected_error_curve(make_optimizer(name, p), fsm, grid, K, seeds);
        int violations = 0;
        double min_ratio = INFINITY;
        for (std::size_t k = 0; k <= K; ++k) {
            const double env = 0.5 * mu * pre * pre * std::pow(ratio, 2.0 * k / nn);
            const double lo = curve.points[k].mean - 3.0 * curve.points[k].std_error;
            if (lo < env) ++violations;
            min_ratio = std::min(min_ratio, lo / env);
        }
        ok = ok && violations == 0;
        detail += std::string(detail.empty() ? "" : "; ") + name + " " + std::to_string(violations) + " violations" +
                  fmt(" (min ratio %.3g)", min_ratio);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- 7
Verdict rlm_envelope() {
    const std::size_t n = 100, K = 500, seeds = 100;
    const double lambda = 0.01;
    FamilySpec rlm{FamilyKind::rlm, 1, 1, 1, lambda, n, 1};
    const auto grid = family_grid(rlm, 17);
    OptimizerParams p;
    p.n = n;
    p.family = OracleFamily::dual;
    const auto curve = expected_error_curve(make_optimizer("sdca", p), rlm, grid, K, seeds, ErrorMeasure::distance);
    const double nn = static_cast<double>(n);
    const double s = std::sqrt(2.0 / (lambda * nn) + 1.0);
    const double ratio = (s - 1.0) / (s + 1.0);
    int violations = 0;
    double min_ratio = INFINITY;
    for (std::size_t k = 0; k <= K; ++k) {
        const double env = nn * lambda / 2.0 * std::pow(ratio, 2.0 * k / nn);
        const double lo = curve.points[k].mean - 3.0 * curve.points[k].std_error;
        if (lo < env) ++violations;
        min_ratio = std::min(min_ratio, lo / env);
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(grid.size()) +
                                 " grid points" + fmt(" (min ratio %.3g)", min_ratio)};
}

// ---------------------------------------------------------------- 8
Verdict degree_lemmas() {
    std::string failures;
    auto attempt = [&](const std::string& label, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            failures += label + ": " + e.what() + "; ";
        }
    };
    FamilySpec fsm{FamilyKind::fsm, 1, 10, 1, 0.01, 3, 4};
    OptimizerParams pf;
    pf.L = 10;
    pf.mu = 1;
    pf.n = 3;
    pf.d = 4;
    for (const char* name : {"gd", "sgd", "sag", "svrg", "cd_cyclic"})
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            attempt(std::string("fsm ") + name, [&] {
                const auto tr = trace_oblivious(make_optimizer(name, pf), fsm, 10, seed);
                for (std::size_t k = 0; k <= 10; ++k)
                    for (const auto& e : tr.history[k].entries)
                        if (e.total_degree() > Degree(static_cast<int>(k))) throw std::runtime_error("degree above k");
            });
    FamilySpec smooth{FamilyKind::smooth, 0.5, 4, 1, 0.01, 1, 3};
    OptimizerParams ps;
    ps.L = 4;
    ps.mu = 0.5;
    ps.n = 1;
    ps.d = 3;
    for (const char* name : {"gd", "sgd", "sag", "svrg"})
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            attempt(std::string("smooth ") + name, [&] {
                const auto tr = trace_oblivious(make_optimizer(name, ps), smooth, 10, seed);
                for (const auto& h : tr.history)
                    for (const auto& e : h.entries)
                        if (e.constant_term() != 0) throw std::runtime_error("nonzero constant term");
            });
    FamilySpec rlm{FamilyKind::rlm, 1, 1, 1, 0.01, 100, 1};
    OptimizerParams pr;
    pr.n = 100;
    pr.family = OracleFamily::dual;
    for (const char* name : {"sdca", "cd_cyclic", "cd_random"})
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            attempt(std::string("rlm ") + name, [&] {
                const auto tr = trace_oblivious(make_optimizer(name, pr), rlm, 10, seed);
                for (std::size_t k = 0; k <= 10; ++k) {
                    std::size_t sum = 0;
                    for (const auto& e : tr.history[k].entries)
                        if (!e.total_degree().is_minus_infinity()) sum += e.total_degree().value();
                    if (sum > k) throw std::runtime_error("degree sum above k");
                }
            });
    return {failures.empty(), failures.empty() ? "fsm, smooth and rlm budgets hold at every step" : failures};
}

// ---------------------------------------------------------------- 9
Verdict separations() {
    const std::size_t n = 8;
    const double kappa = 100, R = 1, mu = 1, L = kappa * mu, half = (L - mu) / 2;
    std::vector<double> lo(n, -half), hi(n, -half);
    hi[0] = half;
    const auto a = fsm_minimizer(lo, L, mu, R, 4), b = fsm_minimizer(hi, L, mu, R, 4);
    double direct = 0;
    for (std::size_t i = 0; i < a.size(); ++i) direct += (a[i] - b[i]) * (a[i] - b[i]);
    direct = std::sqrt(direct);
    const double sep = fsm_minimizer_separation(n, kappa, R);
    const double rlm = rlm_minimizer_separation(0.01, 100);
    const double rlm_exact = 2.0 * std::sqrt(2.0) / 3.0;
    const bool ok = std::abs(sep - direct) <= 1e-14 && std::abs(sep - 0.9246) <= 1e-3 && sep >= 2 * R / (n + 2.0) &&
                    std::abs(rlm - rlm_exact) <= 1e-14;
    return {ok, fmt("fsm %.6f (from minimizers %.6f; floor 0.2); rlm %.6f vs 2sqrt2/3 = %.6f", sep, direct, rlm,
                    rlm_exact)};
}

// ---------------------------------------------------------------- 10
double sign_integral_residual(std::size_t k, std::size_t j) {
    // ∫ η^j sgn(U_k(η)) dη, piecewise between zeros cos(iπ/(k+1)), sign + near 1.
    double total = 0.0, hi = 1.0, sign = 1.0;
    for (std::size_t i = 1; i <= k + 1; ++i) {
        const double lo = i == k + 1 ? -1.0 : std::cos(static_cast<double>(i) * std::numbers::pi / static_cast<double>(k + 1));
        total += sign * (std::pow(hi, j + 1.0) - std::pow(lo, j + 1.0)) / (j + 1.0);
        sign = -sign;
        hi = lo;
    }
    return std::abs(total);
}

Verdict identities() {
    double t1 = 0, integral = 0, orth = 0, orth_lib = 0;
    for (double u : {1.1, 1.25, 2.0, 10.0, 1e6}) t1 = std::max(t1, identity_checks(u, {}).technical1_residual);
    for (double u : {1.5, 2.0, 5.0})
        for (const auto& row : identity_checks(u, {1, 2, 3, 4, 5, 6}).integral_rows) {
            const double z = u + std::sqrt(u * u - 1.0);
            const double closed = 2.0 * std::log((std::pow(z, row.k) + 1.0) / (std::pow(z, row.k) - 1.0));
            integral = std::max(integral, std::abs(row.numeric - closed));
        }
    for (std::size_t k = 1; k <= 10; ++k)
        for (std::size_t j = 0; j < k; ++j) {
            orth = std::max(orth, sign_integral_residual(k, j));
            orth_lib = std::max(orth_lib, sgn_orthogonality_residual(k, j));
        }
    const bool ok = t1 <= 1e-12 && integral <= 1e-6 && orth <= 1e-10 && orth_lib <= 1e-10;
    return {ok, fmt("technical %.2g; integral %.2g; orthogonality %.2g (library %.2g)", t1, integral, orth, orth_lib)};
}

// ---------------------------------------------------------------- 11
struct Fit {
    double slope = 0, r2 = 0;
};

Fit log_linear_fit(const std::vector<double>& err, std::size_t from, std::size_t to, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    double m = 0;
    for (std::size_t k = from; k <= to && k < err.size(); ++k) {
        if (!(err[k] > floor)) continue;
        const double x = static_cast<double>(k), y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        m += 1;
    }
    Fit f;
    if (m < 3) return f;
    const double cov = sxy - sx * sy / m, vx = sxx - sx * sx / m, vy = syy - sy * sy / m;
    f.slope = cov / vx;
    f.r2 = vy > 0 ? cov * cov / (vx * vy) : 1.0;
    return f;
}

Verdict fig1() {
    const std::size_t d = 200, K = 400;
    const double kappa = 100, mu = 1;
    const auto chain = nesterov_chain(d, kappa * mu, mu);
    auto p = params_for(chain);
    p.memory = 100;
    std::vector<std::vector<double>> curves;
    for (const char* name : {"gd", "agd", "hb", "lbfgs"}) curves.push_back(run(make_optimizer(name, p), chain, K, 0).suboptimality);
    const double floor = 1e-13 * curves[0][0];
    const Fit gd = log_linear_fit(curves[0], 50, K, floor);
    const Fit agd = log_linear_fit(curves[1], 50, K, floor);
    const Fit hb = log_linear_fit(curves[2], 50, K, floor);
    const Fit agd_slope = log_linear_fit(curves[1], 50, 300, floor);
    const double target = 2.0 * std::log((std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0));
    const bool slope_ok = std::abs(agd_slope.slope - target) <= 0.2 * std::abs(target);
    const bool linear_ok = gd.r2 >= 0.99 && agd.r2 >= 0.99 && hb.r2 >= 0.99;
    std::size_t hit = K + 1;
    for (std::size_t k = 0; k <= K; ++k)
        if (curves[3][k] <= 1e-10) {
            hit = k;
            break;
        }
    const bool lbfgs_ok = hit < d + 150;
    std::string detail = fmt("agd slope %.4f vs target %.4f (ratio %.2f)", agd_slope.slope, target,
                             agd_slope.slope / target);
    detail += fmt("; R2 gd %.4f agd %.4f hb %.4f", gd.r2, agd.r2, hb.r2);
    detail += "; lbfgs below 1e-10 at k=" + (hit <= K ? std::to_string(hit) : std::string("never")) +
              " (limit " + std::to_string(d + 150) + ")";
    if (!slope_ok) detail += "; slope clause fails";
    return {slope_ok && linear_ok && lbfgs_ok, detail};
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    struct Criterion {
        std::string name;
        std::function<Verdict()> check;
        double seconds_limit;  // 0: no runtime clause
    };
    const std::vector<Criterion> criteria{
        {"gd symbolic trace equals the binomial closed form", gd_trace_exact, 1.0},
        {"analytic bounds below brute-force optima", bound_sandwiches, 30.0},
        {"weighted L2 closed form", exact_l2, 0.0},
        {"toy-family GD sandwich", toy_sandwich, 0.0},
        {"AGD approximates 1/eta better than GD at k=4", fig2, 1.0},
        {"fsm rate envelope audit", fsm_envelope, 120.0},
        {"rlm rate envelope audit", rlm_envelope, 120.0},
        {"degree budgets of oblivious traces", degree_lemmas, 0.0},
        {"minimizer separations", separations, 0.0},
        {"identity suite", identities, 0.0},
        {"chain comparison of GD, AGD, HB and L-BFGS", fig1, 60.0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (criteria[i].seconds_limit > 0 && secs >= criteria[i].seconds_limit) {
            v.ok = false;
            v.detail += fmt("; runtime %.1fs over the %.0fs limit", secs, criteria[i].seconds_limit);
        }
        std::printf("%s criterion %zu: %s [%.2fs] %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(),
                    secs, v.detail.c_str());
        if (!v.ok) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
