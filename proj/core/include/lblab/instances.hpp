#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lblab/field.hpp"

namespace lblab {

// Symmetric tridiagonal matrix; every instance in scope fits this shape
// (2x2 block plus diagonal tail, paired dual blocks, the chain Hessian).
template <class T>
struct SymTridiag {
    std::vector<T> diag;
    std::vector<T> off;  // off[i] couples i and i+1

    std::size_t dim() const { return diag.size(); }

    T row_dot(std::size_t i, const std::vector<T>& x) const {
        T acc = diag[i] * x[i];
        if (i > 0 && !is_zero_value(off[i - 1])) acc += off[i - 1] * x[i - 1];
        if (i + 1 < diag.size() && !is_zero_value(off[i])) acc += off[i] * x[i + 1];
        return acc;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        std::vector<T> out;
        out.reserve(dim());
        for (std::size_t i = 0; i < dim(); ++i) out.push_back(row_dot(i, x));
        return out;
    }
};

template <class T>
struct QuadComponent {
    SymTridiag<T> Q;
    std::vector<T> q;
};

enum class OracleFamily { primal, dual };

// F(w) = (1/n) Σ_j (½ wᵀQ_j w - q_jᵀw)
template <class T>
struct QuadraticModel {
    std::vector<QuadComponent<T>> components;
    OracleFamily family = OracleFamily::primal;
    T zero{};

    std::size_t n() const { return components.size(); }
    std::size_t dim() const { return components.empty() ? 0 : components.front().Q.dim(); }
};

struct QuadraticInstance {
    std::string family;
    std::map<std::string, double> params;
    QuadraticModel<double> model;
    double mu = 0.0, L = 0.0;
    std::vector<double> minimizer;
    double optimal_value = 0.0;

    std::size_t n() const { return model.n(); }
    std::size_t dim() const { return model.dim(); }

    double objective(const std::vector<double>& w) const;
    std::vector<double> gradient(const std::vector<double>& w) const;
    std::vector<double> component_gradient(std::size_t j, const std::vector<double>& w) const;
    // ½(w-w*)ᵀ Q̄ (w-w*), free of the cancellation in F(w) - F*.
    double suboptimality(const std::vector<double>& w) const;
    double distance(const std::vector<double>& w) const;

    Eigen::MatrixXd dense_component(std::size_t j) const;
    Eigen::MatrixXd dense_hessian() const;
    Eigen::VectorXd mean_linear_term() const;

    std::string describe_json() const;
};

struct RlmInstance {
    std::vector<double> psis;
    double lambda = 0.0;
    std::size_t n = 0;
    std::vector<Eigen::VectorXd> data;  // x_{ψ,i}
    QuadraticInstance dual;             // D(α) = ½αᵀQ_ψα - (1/n)𝟙ᵀα, dual oracle family

    double primal_objective(const Eigen::VectorXd& w) const;
    double dual_objective(const std::vector<double>& alpha) const;
    // Primal point associated with a dual point, w = -(1/(λn)) Σ α_i x_i.
    Eigen::VectorXd primal_from_dual(const std::vector<double>& alpha) const;
};

QuadraticInstance toy_instance(double eta, double mu, double L);
QuadraticInstance fsm_instance(const std::vector<double>& etas, double L, double mu, double R, std::size_t d);
std::vector<double> fsm_minimizer(const std::vector<double>& etas, double L, double mu, double R, std::size_t d);
double fsm_minimizer_separation(std::size_t n, double kappa, double R);
QuadraticInstance smooth_instance(double eta, double L, double R, std::size_t d);
RlmInstance rlm_instance(const std::vector<double>& psis, double lambda, std::size_t n);
std::vector<double> rlm_dual_minimizer(const std::vector<double>& psis, double lambda, std::size_t n);
// ‖α*(ψ) - α*(ψ')‖ for ψ, ψ' differing only in the first angle, set to -π/2 and π/2.
double rlm_minimizer_separation(double lambda, std::size_t n);
QuadraticInstance nesterov_chain(std::size_t d, double L, double mu);

// Thomas algorithm for a symmetric tridiagonal solve.
std::vector<double> solve_tridiagonal(const SymTridiag<double>& A, const std::vector<double>& b);

// ------------------------------------------------------------ parametrized families

enum class FamilyKind { toy, fsm, smooth, rlm, chain };
FamilyKind family_from_string(const std::string& s);
std::string to_string(FamilyKind k);

struct FamilySpec {
    FamilyKind kind = FamilyKind::toy;
    double mu = 1.0, L = 4.0, R = 1.0, lambda = 0.01;
    std::size_t n = 1, d = 1;

    std::size_t parameter_count() const;
    OracleFamily oracle_family() const;
    void validate() const;
};

struct GridPoint {
    std::vector<double> params;
    std::size_t coordinate = 0;  // which parameter varies
    double value = 0.0;          // its value
};

// Worst-case grid over the hard subset: one parameter varies over `points`
// values, the others sit at the family's base value.
std::vector<GridPoint> family_grid(const FamilySpec& spec, std::size_t points);
QuadraticInstance make_instance(const FamilySpec& spec, const std::vector<double>& params);

// The family with its parameters as indeterminates; entries are affine in them.
QuadraticModel<MultiPoly> lift_family(const FamilySpec& spec);

}  // namespace lblab
