#include "lblab/approx_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "bounded_simplex.hpp"
#include "lblab/errors.hpp"
#include "lblab/polynomials.hpp"

namespace lblab {

namespace {

// Chebyshev series on [a,b] in the mapped variable t = (2x - a - b)/(b - a).
struct ChebSeries {
    double a, b;
    std::vector<double> c;

    double t_of(double x) const { return (2.0 * x - a - b) / (b - a); }

    double operator()(double x) const {
        if (c.empty()) return 0.0;
        const double t = t_of(x);
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t j = c.size(); j-- > 1;) {
            const double tmp = 2.0 * t * b1 - b2 + c[j];
            b2 = b1;
            b1 = tmp;
        }
        return t * b1 - b2 + c[0];
    }

    std::vector<double> power_coefficients() const {
        if (c.empty()) return {};
        UniPoly t_prev = UniPoly::constant(1), t_cur = UniPoly::identity();
        UniPoly sum = UniPoly::constant(to_rational(c[0]));
        for (std::size_t j = 1; j < c.size(); ++j) {
            if (j > 1) {
                UniPoly next = UniPoly::monomial(1, 2) * t_cur - t_prev;
                t_prev = std::move(t_cur);
                t_cur = std::move(next);
            }
            sum += t_cur * to_rational(c[j]);
        }
        const Rational width = to_rational(b) - to_rational(a);
        const Rational alpha = Rational(2) / width;
        const Rational beta = -(to_rational(a) + to_rational(b)) / width;
        auto out = sum.affine_compose(alpha, beta).double_coeffs();
        out.resize(c.size(), 0.0);
        return out;
    }
};

void chebyshev_row_values(double t, int count, double* out) {
    if (count > 0) out[0] = 1.0;
    if (count > 1) out[1] = t;
    for (int j = 2; j < count; ++j) out[j] = 2.0 * t * out[j - 1] - out[j - 2];
}

void check_inputs(const char* who, double a, double b, int grid, int nbasis) {
    if (!(b > a)) throw DomainError(std::string(who) + ": requires b > a");
    if (grid < 8 * std::max(nbasis, 1)) throw DomainError(std::string(who) + ": grid too coarse for the degree");
}

// True sup of |s - f| on [a,b]: scan a fine Chebyshev grid, then polish each
// prominent local maximum with Brent's method.
double refined_sup(const ChebSeries& s, const RealFn& f, double a, double b, int fine) {
    std::vector<double> xs(fine), es(fine);
    for (int i = 0; i < fine; ++i) {
        xs[i] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(std::numbers::pi * (fine - 1 - i) / (fine - 1));
        es[i] = std::abs(s(xs[i]) - f(xs[i]));
    }
    xs.front() = a;
    xs.back() = b;
    es.front() = std::abs(s(a) - f(a));
    es.back() = std::abs(s(b) - f(b));
    double best = std::max(es.front(), es.back());
    const double coarse_max = *std::max_element(es.begin(), es.end());
    for (int i = 1; i + 1 < fine; ++i) {
        best = std::max(best, es[i]);
        if (es[i] < es[i - 1] || es[i] < es[i + 1] || es[i] < 0.5 * coarse_max) continue;
        auto neg = [&](double x) { return -std::abs(s(x) - f(x)); };
        auto r = boost::math::tools::brent_find_minima(neg, xs[i - 1], xs[i + 1], 52);
        best = std::max(best, -r.second);
    }
    return best;
}

double refined_l1(const ChebSeries& s, const RealFn& f, double a, double b, int fine) {
    auto g = [&](double x) { return s(x) - f(x); };
    std::vector<double> cuts{a};
    double prev_x = a, prev_g = g(a);
    for (int i = 1; i < fine; ++i) {
        const double x = (i == fine - 1) ? b : a + (b - a) * i / (fine - 1);
        const double gx = g(x);
        if ((prev_g < 0.0 && gx > 0.0) || (prev_g > 0.0 && gx < 0.0)) {
            boost::uintmax_t iters = 100;
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            auto root = boost::math::tools::toms748_solve(g, prev_x, x, prev_g, gx, tol, iters);
            cuts.push_back(0.5 * (root.first + root.second));
        }
        prev_x = x;
        prev_g = gx;
    }
    cuts.push_back(b);
    double total = 0.0;
    auto absg = [&](double x) { return std::abs(g(x)); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(absg, cuts[i], cuts[i + 1], 10,
                                                                               1e-11, &err);
    }
    return total;
}

}  // namespace

ApproxResult best_uniform(const RealFn& f, double a, double b, int degree, int grid) {
    if (degree < -1) throw DomainError("best_uniform: degree must be >= -1");
    const int nb = degree + 1;
    check_inputs("best_uniform", a, b, grid, nb);

    const int N = grid;
    std::vector<double> xs(N), ts(N), fs(N);
    for (int i = 0; i < N; ++i) {
        ts[i] = std::cos(std::numbers::pi * (N - 1 - i) / (N - 1));
        xs[i] = 0.5 * (a + b) + 0.5 * (b - a) * ts[i];
        fs[i] = f(xs[i]);
        if (!std::isfinite(fs[i])) throw DomainError("best_uniform: f not finite on the grid");
    }

    ApproxResult out;
    ChebSeries s{a, b, {}};
    if (nb == 0) {
        out.grid_error = 0.0;
        for (double v : fs) out.grid_error = std::max(out.grid_error, std::abs(v));
    } else {
        // Dual of min t s.t. |f_i - Σ c_j T_j(t_i)| ≤ t:
        //   max Σ f_i (p_i - m_i)  s.t. Σ (p_i - m_i) T_j(t_i) = 0,  Σ (p_i + m_i) = 1.
        detail::BoundedLp lp;
        lp.A.resize(nb + 1, 2 * N);
        lp.b = Eigen::VectorXd::Zero(nb + 1);
        lp.b(nb) = 1.0;
        lp.c.resize(2 * N);
        lp.lower = Eigen::VectorXd::Zero(2 * N);
        lp.upper = Eigen::VectorXd::Constant(2 * N, std::numeric_limits<double>::infinity());
        std::vector<double> row(nb);
        for (int i = 0; i < N; ++i) {
            chebyshev_row_values(ts[i], nb, row.data());
            for (int j = 0; j < nb; ++j) {
                lp.A(j, i) = row[j];
                lp.A(j, N + i) = -row[j];
            }
            lp.A(nb, i) = 1.0;
            lp.A(nb, N + i) = 1.0;
            lp.c(i) = fs[i];
            lp.c(N + i) = -fs[i];
        }
        auto sol = detail::solve_bounded_lp(lp, {});
        s.c.assign(sol.duals.data(), sol.duals.data() + nb);
        out.grid_error = sol.objective;
        out.coefficients = s.power_coefficients();
    }
    out.error = refined_sup(s, f, a, b, 10 * N);
    return out;
}

ApproxResult best_l1(const RealFn& f, double a, double b, int k, int grid) {
    if (k < 0) throw DomainError("best_l1: k must be >= 0");
    const int nb = k;  // degree ≤ k-1
    check_inputs("best_l1", a, b, grid, nb);

    const int N = grid;
    const double h = (b - a) / (N - 1);
    std::vector<double> xs(N), ts(N), fs(N), om(N, 1.0);
    om.front() = om.back() = 0.5;
    for (int i = 0; i < N; ++i) {
        xs[i] = (i == N - 1) ? b : a + h * i;
        ts[i] = (2.0 * xs[i] - a - b) / (b - a);
        fs[i] = f(xs[i]);
        if (!std::isfinite(fs[i])) throw DomainError("best_l1: f not finite on the grid");
    }

    ApproxResult out;
    ChebSeries s{a, b, {}};
    if (nb == 0) {
        double sum = 0.0;
        for (int i = 0; i < N; ++i) sum += om[i] * std::abs(fs[i]);
        out.grid_error = h * sum;
    } else {
        // Dual of min Σ ω_i |f_i - Σ c_j T_j(t_i)|:
        //   max Σ ω_i f_i v_i  s.t. Σ ω_i T_j(t_i) v_i = 0,  -1 ≤ v_i ≤ 1.
        detail::BoundedLp lp;
        lp.A.resize(nb, N);
        lp.b = Eigen::VectorXd::Zero(nb);
        lp.c.resize(N);
        lp.lower = Eigen::VectorXd::Constant(N, -1.0);
        lp.upper = Eigen::VectorXd::Constant(N, 1.0);
        std::vector<double> row(nb);
        Eigen::MatrixXd V(N, nb);
        Eigen::VectorXd F(N);
        for (int i = 0; i < N; ++i) {
            chebyshev_row_values(ts[i], nb, row.data());
            for (int j = 0; j < nb; ++j) {
                lp.A(j, i) = om[i] * row[j];
                V(i, j) = row[j];
            }
            lp.c(i) = om[i] * fs[i];
            F(i) = fs[i];
        }
        // Start each v_i at the sign of a least-squares residual: phase 1 then
        // only has a small imbalance to repair.
        const Eigen::VectorXd ls = V.colPivHouseholderQr().solve(F);
        const Eigen::VectorXd resid = F - V * ls;
        std::vector<bool> start_upper(N);
        for (int i = 0; i < N; ++i) start_upper[i] = resid(i) > 0.0;
        auto sol = detail::solve_bounded_lp(lp, start_upper);
        s.c.assign(sol.duals.data(), sol.duals.data() + nb);
        out.grid_error = h * sol.objective;
        out.coefficients = s.power_coefficients();
    }
    out.error = refined_l1(s, f, a, b, 10 * N);
    return out;
}

L2Result best_weighted_l2(double alpha, int k) {
    if (!(alpha > -1.0 && alpha < 0.0)) throw DomainError("best_weighted_l2: requires alpha in (-1,0)");
    if (k < 0) throw DomainError("best_weighted_l2: requires k >= 0");
    if (k > kMaxWeightedL2Basis)
        throw ConditioningError("best_weighted_l2: Gram matrix of Hilbert type, refusing k > 12");

    const Rational ar = to_rational(alpha);
    // Inner products <g_i, g_j> = 1/(i + j + alpha + 2), g_i = η^(i + (1+alpha)/2).
    auto ip = [&](int i, int j) { return Rational(1) / (Rational(i + j) + ar + 2); };

    L2Result out;
    if (k == 0) {
        out.error = to_double(ip(0, 0));
        return out;
    }
    std::vector<std::vector<Rational>> G(k, std::vector<Rational>(k + 1));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) G[i][j] = ip(i + 1, j + 1);
        G[i][k] = ip(i + 1, 0);
    }
    // Gauss-Jordan; the Gram matrix is positive definite so pivots never vanish.
    for (int p = 0; p < k; ++p) {
        const Rational inv = Rational(1) / G[p][p];
        for (int j = p; j <= k; ++j) G[p][j] *= inv;
        for (int i = 0; i < k; ++i) {
            if (i == p || G[i][p] == 0) continue;
            const Rational factor = G[i][p];
            for (int j = p; j <= k; ++j) G[i][j] -= factor * G[p][j];
        }
    }
    Rational err = ip(0, 0);
    for (int i = 0; i < k; ++i) {
        err -= ip(i + 1, 0) * G[i][k];
        out.coefficients.push_back(to_double(G[i][k]));
    }
    out.error = to_double(err);
    return out;
}

}  // namespace lblab
