#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace nvcav::detail {

/// Nonlinear least-squares problem min 0.5 |r(x)|^2 with analytic Jacobian.
struct LeastSquaresProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
    /// Maps a trial point back into the feasible set (may be empty).
    std::function<void(Eigen::VectorXd&)> project;
};

struct LevenbergMarquardtOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-10;  // on the cost change of an accepted step
    double initial_damping = 1e-3;
    double max_damping = 1e16;
};

struct LevenbergMarquardtResult {
    Eigen::VectorXd x;
    double cost = 0;  // 0.5 |r|^2
    bool converged = false;
    bool singular = false;  // normal equations could not be solved
    int iterations = 0;
    std::vector<double> accepted_costs;  // cost after each accepted step
};

/// Damped Gauss-Newton with Marquardt diagonal scaling. The damping grows
/// tenfold on a rejected step and shrinks on an accepted one; only
/// cost-decreasing steps are accepted.
LevenbergMarquardtResult levenberg_marquardt(const LeastSquaresProblem& problem,
                                             Eigen::VectorXd x0,
                                             const LevenbergMarquardtOptions& options);

}  // namespace nvcav::detail
