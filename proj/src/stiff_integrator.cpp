#include "stiff_integrator.hpp"

#include <algorithm>
#include <cmath>

namespace nvcav::detail {

namespace {

// Radau IIA, s = 3.
struct Tableau {
    Eigen::Matrix3d a;

    Tableau() {
        const double s6 = std::sqrt(6.0);
        a << (88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0,
            (296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0,
            (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
    }
};

const Tableau& tableau() {
    static const Tableau t;
    return t;
}

// Stage system (I - h A (x) M) Y = [y; y; y]; the method is stiffly accurate
// so the new state is the last stage.
class StepOperator {
public:
    StepOperator(const Eigen::MatrixXd& m, double h) : n_(m.rows()) {
        const auto& a = tableau().a;
        Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3 * n_, 3 * n_);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k.block(i * n_, j * n_, n_, n_) -= h * a(i, j) * m;
        lu_.compute(k);
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& y) const {
        Eigen::VectorXd rhs(3 * n_);
        rhs << y, y, y;
        const Eigen::VectorXd stages = lu_.solve(rhs);
        return stages.tail(n_);
    }

private:
    Eigen::Index n_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

constexpr double kOrder = 5.0;

}  // namespace

bool integrate_linear_radau(const Eigen::MatrixXd& a, Eigen::VectorXd& y, double duration,
                            double abs_tolerance, double initial_step, std::size_t max_steps,
                            IntegrationStats* stats) {
    if (duration <= 0) return true;

    double t = 0;
    double h = std::min(initial_step, duration);
    std::size_t steps = 0;
    const double richardson = std::pow(2.0, kOrder) - 1.0;

    while (t < duration) {
        if (++steps > max_steps) return false;
        const bool last = t + h >= duration;
        if (last) h = duration - t;

        const StepOperator full(a, h);
        const StepOperator half(a, 0.5 * h);
        const Eigen::VectorXd coarse = full.apply(y);
        const Eigen::VectorXd fine = half.apply(half.apply(y));

        const double err = (fine - coarse).cwiseAbs().maxCoeff() / richardson;
        const double factor =
            err == 0 ? 4.0 : std::clamp(0.9 * std::pow(abs_tolerance / err, 1.0 / (kOrder + 1.0)), 0.2, 4.0);

        if (err <= abs_tolerance) {
            y = fine;
            t = last ? duration : t + h;
            if (stats) ++stats->accepted;
        } else if (stats) {
            ++stats->rejected;
        }
        h *= factor;
        if (h < 1e-14 * std::max(duration, 1e-300) && t < duration) return false;
    }
    return true;
}

}  // namespace nvcav::detail
