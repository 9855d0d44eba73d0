#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lblab::detail {

// maximize cᵀx  subject to  A x = b,  lower ≤ x ≤ upper  (upper may be +inf).
// Dense, intended for few rows and many columns.
struct BoundedLp {
    Eigen::MatrixXd A;
    Eigen::VectorXd b, c, lower, upper;
};

struct LpResult {
    Eigen::VectorXd x;
    Eigen::VectorXd duals;  // simplex multipliers of the equality rows
    double objective = 0.0;
    int iterations = 0;
};

// start_at_upper[j] chooses the initial nonbasic bound of variable j; it must be
// finite there. Throws std::runtime_error on infeasibility or unboundedness.
LpResult solve_bounded_lp(const BoundedLp& lp, const std::vector<bool>& start_at_upper);

}  // namespace lblab::detail
