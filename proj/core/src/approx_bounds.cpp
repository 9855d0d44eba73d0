#include "lblab/approx_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lblab/errors.hpp"

namespace lblab {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

double need(const std::optional<double>& v, const char* name) {
    if (!v) throw std::invalid_argument(std::string("theorem_bounds: missing parameter ") + name);
    return *v;
}

// (√r - 1)/(√r + 1) written as (r-1)/(√r+1)² to avoid cancellation near r = 1.
double sqrt_ratio(double r) {
    const double s = std::sqrt(r);
    return (r - 1.0) / ((s + 1.0) * (s + 1.0));
}

}  // namespace

double RateEnvelope::operator()(double k) const {
    if (ratio == 0.0) return k == 0.0 ? prefactor : 0.0;
    return prefactor * std::pow(ratio, k * per_iteration_exponent);
}

double ProblemParams::kappa() const { return need(L, "L") / need(mu, "mu"); }
double ProblemParams::delta() const { return 2.0 * (need(alpha, "alpha") + 1.0) + 2.0; }

double chebyshev_lb_inf(double c, int k) {
    require(c > 1.0, "chebyshev_lb_inf: requires c > 1");
    require(k >= 0, "chebyshev_lb_inf: requires k >= 0");
    const double root = std::sqrt(c * c - 1.0);
    const double base = 1.0 / (c + root);  // c - √(c²-1)
    return std::pow(base, k) / (c * c - 1.0);
}

double maxnorm_lb(double a, double b, double c, int k) {
    require(b > a && a > 0.0, "maxnorm_lb: requires b > a > 0");
    require(c > -a, "maxnorm_lb: requires c > -a");
    require(k >= 0, "maxnorm_lb: requires k >= 0");
    const double width = b - a;
    const double sum = b + a + 2.0 * c;
    const double lead = 2.0 * width / ((sum - width) * (sum + width));
    return lead * std::pow(sqrt_ratio((b + c) / (a + c)), k);
}

double l1_lb(double L, double mu, double alpha, int k) {
    require(L > mu, "l1_lb: requires L > mu");
    require(alpha > (L - mu) / 2.0, "l1_lb: requires alpha > (L-mu)/2");
    require(k >= 0, "l1_lb: requires k >= 0");
    const double r = (2.0 * alpha + L - mu) / (2.0 * alpha + mu - L);
    return std::pow(sqrt_ratio(r), k);
}

double l2_weighted_lb(double alpha, int k) {
    require(alpha > -1.0 && alpha < 0.0, "l2_weighted_lb: requires alpha in (-1,0)");
    require(k >= 0, "l2_weighted_lb: requires k >= 0");
    const double e2 = std::exp(2.0);
    return 1.0 / (e2 * std::pow(k + 2.0, 2.0 * (alpha + 1.0) + 2.0));
}

double l2_weighted_exact(double alpha, int k) {
    require(alpha > -1.0 && alpha < 0.0, "l2_weighted_exact: requires alpha in (-1,0)");
    require(k >= 0, "l2_weighted_exact: requires k >= 0");
    double prod = 1.0;
    for (int j = 1; j <= k; ++j) prod *= j / (j + alpha + 1.0);
    const double tail = k + alpha + 2.0;
    return (alpha + 2.0) * prod * prod / (tail * tail);
}

double fsm_ratio(double kappa, double n) {
    require(kappa >= 1.0 && n >= 1.0, "fsm_ratio: requires kappa >= 1, n >= 1");
    return sqrt_ratio(1.0 + (kappa - 1.0) / n);
}

double fsm_rate_envelope(double kappa, int n, double k, double prefactor) {
    RateEnvelope env{prefactor, fsm_ratio(kappa, n), 1.0 / n};
    return env(k);
}

double fsm_distance_prefactor(double L, double mu, double R, int n) {
    require(L > mu && mu > 0.0, "fsm prefactor: requires L > mu > 0");
    return n * R * mu / (std::sqrt(2.0) * (L - mu));
}

double fsm_value_envelope(double L, double mu, double R, int n, double k) {
    // At kappa = 1 the ratio is 0 and the prefactor is undefined; nothing is certified.
    if (L <= mu) return 0.0;
    const double pre = fsm_distance_prefactor(L, mu, R, n);
    return fsm_rate_envelope(L / mu, n, 2.0 * k, 0.5 * mu * pre * pre);
}

double rlm_ratio(double lambda, int n) {
    require(lambda > 0.0 && n >= 1, "rlm_ratio: requires lambda > 0, n >= 1");
    return sqrt_ratio(2.0 / (lambda * n) + 1.0);
}

double rlm_distance_envelope(double lambda, int n, double k) {
    RateEnvelope env{n * lambda / 2.0, rlm_ratio(lambda, n), 2.0 / n};
    return env(k);
}

double iteration_lb_from_rate(double L, double mu, double alpha, double c, double eps) {
    require(L > mu && mu > 0.0, "iteration_lb_from_rate: requires L > mu > 0");
    require(alpha >= 0.0 && c > 0.0 && eps > 0.0, "iteration_lb_from_rate: requires alpha >= 0, c > 0, eps > 0");
    if (eps >= c) return 0.0;
    return 0.5 * std::sqrt((L + alpha) / (mu + alpha) - 1.0) * (std::log(c) + std::log(1.0 / eps));
}

TheoremKind theorem_kind_from_string(const std::string& s) {
    if (s == "toy") return TheoremKind::toy;
    if (s == "fsm") return TheoremKind::fsm;
    if (s == "smooth") return TheoremKind::smooth;
    if (s == "rlm") return TheoremKind::rlm;
    throw std::invalid_argument("unknown theorem variant: " + s);
}

TheoremBound theorem_bounds(const ProblemParams& p, TheoremKind which) {
    TheoremBound out;
    switch (which) {
        case TheoremKind::toy: {
            // R stands for |x*|.
            const double L = need(p.L, "L"), mu = need(p.mu, "mu"), R = need(p.R, "R"), eps = need(p.eps, "eps");
            require(L > mu && mu > 0.0, "toy bound: requires L > mu > 0");
            const double kappa = L / mu;
            out.raw = 0.25 * std::sqrt(kappa - 1.0) *
                      (std::log(mu / 2.0) + 2.0 * std::log(R * (L - mu) / (2.0 * L)) + std::log(1.0 / eps));
            out.rate_arm = out.raw;
            break;
        }
        case TheoremKind::fsm: {
            const double L = need(p.L, "L"), mu = need(p.mu, "mu"), R = need(p.R, "R"), eps = need(p.eps, "eps");
            const double n = need(p.n, "n");
            require(L > mu && mu > 0.0, "fsm bound: requires L > mu > 0");
            const double kappa = L / mu;
            const double pre = n * R * mu / (std::sqrt(2.0) * (L - mu));
            out.rate_arm = 0.25 * std::sqrt(n * (kappa - 1.0)) *
                           (std::log(mu / 2.0) + 2.0 * std::log(pre) + std::log(1.0 / eps));
            out.count_arm = n;
            out.raw = std::max(n, out.rate_arm);
            break;
        }
        case TheoremKind::smooth: {
            const double L = need(p.L, "L"), R = need(p.R, "R"), eps = need(p.eps, "eps"), alpha = need(p.alpha, "alpha");
            require(alpha > -1.0 && alpha < 0.0, "smooth bound: requires alpha in (-1,0)");
            out.raw = std::pow(L * R * R * (alpha + 1.0) / (std::exp(2.0) * eps), 1.0 / (2.0 * alpha + 4.0)) - 2.0;
            out.rate_arm = out.raw;
            break;
        }
        case TheoremKind::rlm: {
            const double n = need(p.n, "n"), lambda = need(p.lambda, "lambda"), eps = need(p.eps, "eps");
            require(lambda > 0.0, "rlm bound: requires lambda > 0");
            out.rate_arm = 0.125 * std::sqrt(2.0 * n / lambda) *
                           (std::log(n * n * lambda * lambda / 8.0) + std::log(1.0 / eps));
            out.count_arm = n / 2.0;
            out.raw = std::max(n / 2.0, out.rate_arm);
            break;
        }
    }
    out.value = std::max(0.0, out.raw);
    return out;
}

double smooth_bound_delta_form(double L, double delta, double eps) {
    require(delta > 2.0 && delta < 4.0, "smooth_bound_delta_form: requires delta in (2,4)");
    return std::pow(L * (delta - 2.0) / eps, 1.0 / delta);
}

IdentityReport identity_checks(double u, const std::vector<int>& ks) {
    require(u > 1.0, "identity_checks: requires u > 1");
    IdentityReport rep;
    rep.u = u;

    const double root = std::sqrt((u - 1.0) * (u + 1.0));
    const double lhs = 1.0 / (u + root);
    const double s = std::sqrt((u - 1.0) / (u + 1.0));
    // (1-s)/(1+s) with 1-s = (1-s²)/(1+s) = (2/(u+1))/(1+s).
    const double rhs = (2.0 / (u + 1.0)) / ((1.0 + s) * (1.0 + s));
    rep.technical1_residual = std::abs(lhs - rhs);

    const double z = u + root;
    for (int k : ks) {
        require(k >= 1, "identity_checks: integral rows need k >= 1");
        auto integrand = [u](double eta) { return 1.0 / (u - eta); };
        double numeric = 0.0;
        // Pieces between consecutive sign changes cos(jπ/k); the sign is read
        // off the midpoint, independently of the closed form.
        for (int j = 1; j <= k; ++j) {
            const double hi = std::cos((j - 1) * std::numbers::pi / k);
            const double lo = std::cos(j * std::numbers::pi / k);
            const double mid = 0.5 * (hi + lo);
            const double sgn = std::sin(k * std::acos(mid)) >= 0.0 ? 1.0 : -1.0;
            double err = 0.0;
            numeric += sgn * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 15,
                                                                                           1e-14, &err);
        }
        const double zk = std::pow(z, k);
        const double closed = 2.0 * std::log1p(2.0 / (zk - 1.0));
        rep.integral_rows.push_back({k, numeric, closed, std::abs(numeric - closed)});
    }
    return rep;
}

}  // namespace lblab
