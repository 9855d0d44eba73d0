#pragma once

// Scalar operations shared by the numeric (double) and symbolic (MultiPoly)
// executors.

#include "lblab/errors.hpp"
#include "lblab/polynomials.hpp"

namespace lblab {

inline double scaled(double x, double s) { return x * s; }
inline MultiPoly scaled(const MultiPoly& x, double s) {
    if (s == 1.0) return x;
    return x * to_rational(s);
}

inline double divide_by_constant(double x, double c) { return x / c; }
inline MultiPoly divide_by_constant(const MultiPoly& x, const MultiPoly& c) {
    if (!c.is_constant() || c.is_zero())
        throw InvariantViolation("divisor is not a nonzero constant polynomial");
    return x * (Rational(1) / c.constant_term());
}

inline bool is_zero_value(double x) { return x == 0.0; }
inline bool is_zero_value(const MultiPoly& x) { return x.is_zero(); }

}  // namespace lblab
