#include "bounded_simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lblab::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { basic, at_lower, at_upper };

struct Tableau {
    Eigen::MatrixXd A;  // original columns followed by artificials
    Eigen::VectorXd b, lower, upper, x;
    std::vector<Status> status;
    std::vector<int> basis;  // basis[row] = column
    int iterations = 0;
};

// Revised primal simplex with explicit basis inverse (m is tiny).
// Dantzig pricing; Bland's rule after a run of degenerate steps.
void optimize(Tableau& t, const Eigen::VectorXd& cost, int max_iter) {
    const int m = static_cast<int>(t.A.rows());
    const int N = static_cast<int>(t.A.cols());
    const double ctol = 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff());
    int degenerate_run = 0;

    for (int it = 0; it < max_iter; ++it, ++t.iterations) {
        Eigen::MatrixXd B(m, m);
        Eigen::VectorXd cB(m);
        for (int r = 0; r < m; ++r) {
            B.col(r) = t.A.col(t.basis[r]);
            cB(r) = cost(t.basis[r]);
        }
        const Eigen::MatrixXd Binv = B.fullPivLu().inverse();

        // Refresh basic values from the nonbasic ones to stop drift.
        Eigen::VectorXd xN = t.x;
        for (int r = 0; r < m; ++r) xN(t.basis[r]) = 0.0;
        Eigen::VectorXd xB = Binv * (t.b - t.A * xN);
        for (int r = 0; r < m; ++r) t.x(t.basis[r]) = xB(r);

        const Eigen::VectorXd y = Binv.transpose() * cB;
        const Eigen::VectorXd d = cost - t.A.transpose() * y;

        const bool bland = degenerate_run > 50;
        int enter = -1;
        double best = 0.0;
        for (int j = 0; j < N; ++j) {
            if (t.status[j] == Status::basic) continue;
            if (t.upper(j) - t.lower(j) <= 0.0) continue;  // fixed variable
            double gain = 0.0;
            if (t.status[j] == Status::at_lower && d(j) > ctol) gain = d(j);
            if (t.status[j] == Status::at_upper && d(j) < -ctol) gain = -d(j);
            if (gain <= 0.0) continue;
            if (bland) {
                enter = j;
                break;
            }
            if (gain > best) {
                best = gain;
                enter = j;
            }
        }
        if (enter < 0) return;

        const double dir = t.status[enter] == Status::at_lower ? 1.0 : -1.0;
        const Eigen::VectorXd alpha = Binv * t.A.col(enter);

        // Harris two-pass ratio test.
        const double ptol = 1e-11;
        const double ftol = 1e-12;
        double theta_max = t.upper(enter) - t.lower(enter);
        for (int r = 0; r < m; ++r) {
            const int j = t.basis[r];
            const double rate = dir * alpha(r);  // x_B decreases by rate*theta
            if (rate > ptol) theta_max = std::min(theta_max, (t.x(j) - t.lower(j) + ftol) / rate);
            else if (rate < -ptol && t.upper(j) < kInf)
                theta_max = std::min(theta_max, (t.upper(j) - t.x(j) + ftol) / -rate);
        }
        if (!std::isfinite(theta_max)) throw std::runtime_error("bounded simplex: unbounded problem");

        int leave = -1;
        double leave_pivot = 0.0;
        double theta = t.upper(enter) - t.lower(enter);
        bool leave_to_upper = false;
        for (int r = 0; r < m; ++r) {
            const int j = t.basis[r];
            const double rate = dir * alpha(r);
            double ratio = kInf;
            bool to_upper = false;
            if (rate > ptol) ratio = (t.x(j) - t.lower(j)) / rate;
            else if (rate < -ptol && t.upper(j) < kInf) {
                ratio = (t.upper(j) - t.x(j)) / -rate;
                to_upper = true;
            }
            if (ratio > theta_max) continue;
            const bool better = bland ? (leave < 0 || j < t.basis[leave]) : std::abs(rate) > leave_pivot;
            if (better) {
                leave = r;
                leave_pivot = std::abs(rate);
                theta = std::max(0.0, ratio);
                leave_to_upper = to_upper;
            }
        }

        degenerate_run = theta <= 1e-14 ? degenerate_run + 1 : 0;

        if (leave < 0) {
            // Bound flip of the entering variable.
            t.status[enter] = dir > 0 ? Status::at_upper : Status::at_lower;
            t.x(enter) = dir > 0 ? t.upper(enter) : t.lower(enter);
            continue;
        }
        const int out = t.basis[leave];
        t.x(enter) += dir * theta;
        t.status[out] = leave_to_upper ? Status::at_upper : Status::at_lower;
        t.x(out) = leave_to_upper ? t.upper(out) : t.lower(out);
        t.status[enter] = Status::basic;
        t.basis[leave] = enter;
    }
    throw std::runtime_error("bounded simplex: iteration limit reached");
}

}  // namespace

LpResult solve_bounded_lp(const BoundedLp& lp, const std::vector<bool>& start_at_upper) {
    const int m = static_cast<int>(lp.A.rows());
    const int n = static_cast<int>(lp.A.cols());

    Tableau t;
    t.A.resize(m, n + m);
    t.A.leftCols(n) = lp.A;
    t.lower.resize(n + m);
    t.upper.resize(n + m);
    t.lower.head(n) = lp.lower;
    t.upper.head(n) = lp.upper;
    t.x = Eigen::VectorXd::Zero(n + m);
    t.status.assign(n + m, Status::at_lower);
    t.b = lp.b;

    for (int j = 0; j < n; ++j) {
        const bool up = j < static_cast<int>(start_at_upper.size()) && start_at_upper[j];
        t.x(j) = up ? lp.upper(j) : lp.lower(j);
        if (!std::isfinite(t.x(j))) throw std::invalid_argument("bounded simplex: infinite starting bound");
        t.status[j] = up ? Status::at_upper : Status::at_lower;
    }
    const Eigen::VectorXd resid = lp.b - lp.A * t.x.head(n);
    t.A.rightCols(m).setZero();
    for (int r = 0; r < m; ++r) {
        const double s = resid(r) >= 0.0 ? 1.0 : -1.0;
        t.A(r, n + r) = s;
        t.x(n + r) = std::abs(resid(r));
        t.lower(n + r) = 0.0;
        t.upper(n + r) = kInf;
        t.status[n + r] = Status::basic;
        t.basis.push_back(n + r);
    }

    const int max_iter = 50 * (n + m) + 1000;
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
    phase1.tail(m).setConstant(-1.0);
    optimize(t, phase1, max_iter);
    const double infeas = t.x.tail(m).sum();
    if (infeas > 1e-9 * (1.0 + lp.b.cwiseAbs().sum()))
        throw std::runtime_error("bounded simplex: infeasible problem");

    for (int r = 0; r < m; ++r) {
        t.upper(n + r) = 0.0;
        if (t.status[n + r] != Status::basic) t.x(n + r) = 0.0;
    }
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
    phase2.head(n) = lp.c;
    optimize(t, phase2, max_iter);

    LpResult res;
    res.x = t.x.head(n);
    res.objective = lp.c.dot(res.x);
    res.iterations = t.iterations;
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd cB(m);
    for (int r = 0; r < m; ++r) {
        B.col(r) = t.A.col(t.basis[r]);
        cB(r) = phase2(t.basis[r]);
    }
    res.duals = B.fullPivLu().inverse().transpose() * cB;
    return res;
}

}  // namespace lblab::detail
