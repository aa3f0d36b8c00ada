#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace nvcav::detail {

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Adaptive 3-stage Radau IIA (order 5) for the constant-coefficient linear
/// system y' = A y. Local error is estimated by step doubling. Returns false
/// if the step size underflows or `max_steps` is exhausted.
bool integrate_linear_radau(const Eigen::MatrixXd& a, Eigen::VectorXd& y, double duration,
                            double abs_tolerance, double initial_step, std::size_t max_steps,
                            IntegrationStats* stats = nullptr);

}  // namespace nvcav::detail
