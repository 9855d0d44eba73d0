#pragma once

#include <string>
#include <vector>

#include "lblab/instances.hpp"
#include "lblab/optimizers.hpp"
#include "lblab/polynomials.hpp"

namespace lblab {

// GD iterate on the toy family as a polynomial in η, by running the recursion
// w <- (1 - η/L) w + 1/L from w = 0.
UniPoly trace_gd_toy(std::size_t k, const Rational& L);
// (1/L) Σ_{i<k} (-1)^i C(k, i+1) (η/L)^i
UniPoly gd_toy_closed_form(std::size_t k, const Rational& L);

struct Trace {
    std::string schedule;
    FamilySpec family;
    std::uint64_t seed = 0;
    std::size_t steps = 0;
    std::vector<PolyVector> points;      // final value of every tracked point
    std::vector<PolyVector> history;     // point 0 after each step, history[0] = initialization
};

// Runs an oblivious schedule with iterates that are polynomials in the
// family's parameters and checks the degree budget after every step.
// Throws InvariantViolation on a budget breach and std::invalid_argument for
// schedules that are not oblivious.
Trace trace_oblivious(const Schedule& schedule, const FamilySpec& family, std::size_t k, std::uint64_t seed);

// Budget check used by trace_oblivious; exposed so tests can feed it vectors.
void check_degree_budget(const PolyVector& v, FamilyKind kind, std::size_t step);

// Evaluates a traced point at concrete parameters. RLM traces are polynomials
// in sin ψ, so ψ is mapped through sin first.
std::vector<double> evaluate_trace(const PolyVector& v, FamilyKind kind, const std::vector<double>& params);

// max over the grid of ‖trace(params) - w*(params)‖.
double trace_sup_error(const PolyVector& trace, const FamilySpec& family, const std::vector<GridPoint>& grid);

struct Fig2Table {
    std::vector<double> eta;
    std::vector<std::vector<double>> gd, agd;  // [k-1][row]
    std::vector<double> target;

    std::string csv() const;
};

Fig2Table fig2_data(double L, double mu, std::size_t k_max = 4, std::size_t points = 1025);

}  // namespace lblab
