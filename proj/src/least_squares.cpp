#include "least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace nvcav::detail {

LevenbergMarquardtResult levenberg_marquardt(const LeastSquaresProblem& problem,
                                             Eigen::VectorXd x0,
                                             const LevenbergMarquardtOptions& options) {
    LevenbergMarquardtResult result;
    if (problem.project) problem.project(x0);
    result.x = std::move(x0);

    Eigen::VectorXd r = problem.residual(result.x);
    result.cost = 0.5 * r.squaredNorm();
    double damping = options.initial_damping;

    while (result.iterations < options.max_iterations) {
        ++result.iterations;
        const Eigen::MatrixXd jac = problem.jacobian(result.x);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd gradient = jac.transpose() * r;
        const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-30);

        if (jtj.diagonal().maxCoeff() <= 0 || !gradient.allFinite()) {
            result.singular = true;
            return result;
        }

        bool accepted = false;
        while (damping <= options.max_damping) {
            Eigen::MatrixXd lhs = jtj;
            lhs.diagonal() += damping * diag;
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
                damping *= 10;
                continue;
            }
            Eigen::VectorXd trial = result.x - ldlt.solve(gradient);
            if (problem.project) problem.project(trial);
            const Eigen::VectorXd trial_r = problem.residual(trial);
            const double trial_cost = 0.5 * trial_r.squaredNorm();

            if (std::isfinite(trial_cost) && trial_cost < result.cost) {
                const double change = (result.cost - trial_cost) / std::max(result.cost, 1e-300);
                result.x = std::move(trial);
                r = trial_r;
                result.cost = trial_cost;
                result.accepted_costs.push_back(trial_cost);
                damping = std::max(damping / 3.0, 1e-12);
                accepted = true;
                if (change < options.relative_tolerance) {
                    result.converged = true;
                    return result;
                }
                break;
            }
            damping *= 10;
        }
        if (!accepted) {
            // No descent direction left at working precision: a stationary point.
            result.converged = true;
            return result;
        }
    }
    return result;
}

}  // namespace nvcav::detail
