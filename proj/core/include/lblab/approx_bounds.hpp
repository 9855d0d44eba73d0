#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lblab {

struct RateEnvelope {
    double prefactor = 1.0;
    double ratio = 0.0;
    double per_iteration_exponent = 1.0;

    double operator()(double k) const;
};

struct ProblemParams {
    std::optional<double> L, mu, n, R, lambda, eps, alpha;

    double kappa() const;
    double delta() const;  // 2(alpha+1)+2, the smooth-case exponent
};

// Uniform error of the best degree-k approximation of 1/(η-c) on [-1,1].
double chebyshev_lb_inf(double c, int k);

// Uniform error bound for degree-k approximation of 1/(η+c) on [a,b].
double maxnorm_lb(double a, double b, double c, int k);

// Bound on ∫|p(η) - 1/(η+alpha)| over [-(L-mu)/2, (L-mu)/2] for deg p ≤ k-1.
double l1_lb(double L, double mu, double alpha, int k);

// Bound on min over deg s ≤ k-1 of ∫₀¹ η (s(η)η-1)² η^alpha dη.
double l2_weighted_lb(double alpha, int k);
double l2_weighted_exact(double alpha, int k);

double fsm_ratio(double kappa, double n);
double fsm_rate_envelope(double kappa, int n, double k, double prefactor);
// Appendix prefactor n R mu / (sqrt(2)(L-mu)) for the distance form.
double fsm_distance_prefactor(double L, double mu, double R, int n);
// Function-value envelope (mu/2) * (distance envelope)^2.
double fsm_value_envelope(double L, double mu, double R, int n, double k);

double rlm_ratio(double lambda, int n);
// Distance form (n lambda / 2) * ratio^(2k/n).
double rlm_distance_envelope(double lambda, int n, double k);

double iteration_lb_from_rate(double L, double mu, double alpha, double c, double eps);

enum class TheoremKind { toy, fsm, smooth, rlm };
TheoremKind theorem_kind_from_string(const std::string& s);

struct TheoremBound {
    double value = 0.0;  // clamped at 0
    double raw = 0.0;
    // For the max(...) forms, the two arms separately; otherwise rate_arm == raw.
    double rate_arm = 0.0;
    std::optional<double> count_arm;
};

TheoremBound theorem_bounds(const ProblemParams& p, TheoremKind which);

// Theorem-level packaging (L(δ-2)/ε)^{1/δ} of the smooth case, reported next to the
// explicit form; the two are not claimed to agree numerically.
double smooth_bound_delta_form(double L, double delta, double eps);

struct IdentityReport {
    double u = 0.0;
    double technical1_residual = 0.0;
    struct IntegralRow {
        int k;
        double numeric;
        double closed_form;
        double residual;
    };
    std::vector<IntegralRow> integral_rows;
};

IdentityReport identity_checks(double u, const std::vector<int>& ks);

}  // namespace lblab
