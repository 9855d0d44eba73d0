#pragma once

#include <functional>
#include <vector>

namespace lblab {

using RealFn = std::function<double(double)>;

struct ApproxResult {
    // Error of the returned candidate measured on the continuum (refined sup or
    // adaptive integral). It can never fall below the continuous optimum.
    double error = 0.0;
    // Optimum of the discretized problem. For minimax it never exceeds the
    // continuous optimum.
    double grid_error = 0.0;
    // Power-basis coefficients in η, ascending.
    std::vector<double> coefficients;
};

constexpr int kDefaultUniformGrid = 4097;
constexpr int kDefaultL1Grid = 8193;

// Best uniform approximation of f on [a,b] by polynomials of degree ≤ degree,
// by LP over a Chebyshev-distributed grid.
ApproxResult best_uniform(const RealFn& f, double a, double b, int degree, int grid = kDefaultUniformGrid);

// Best L1 approximation of f on [a,b] over polynomials of degree ≤ k-1
// (k = 0 means the zero polynomial), by LP over a uniform trapezoid grid.
ApproxResult best_l1(const RealFn& f, double a, double b, int k, int grid = kDefaultL1Grid);

struct L2Result {
    double error = 0.0;  // squared weighted L2 error
    std::vector<double> coefficients;
};

// min over c of ∫₀¹ η^(1+alpha) (1 - Σ_{i=1..k} c_i η^i)² dη, solved exactly in
// rational arithmetic. Refuses k > 12.
L2Result best_weighted_l2(double alpha, int k);

constexpr int kMaxWeightedL2Basis = 12;

}  // namespace lblab
