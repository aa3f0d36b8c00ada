#include "nvcav/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nvcav/errors.hpp"
#include "stiff_integrator.hpp"

namespace nvcav {

Populations Populations::pure(Level level) {
    Populations p;
    p.values_(static_cast<Eigen::Index>(index(level))) = 1.0;
    return p;
}

Populations::Populations(const Vector7& values, double tolerance) : values_(values) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values(i)) || values(i) < -tolerance || values(i) > 1.0 + tolerance)
            throw InvalidArgument("population component " + std::to_string(i + 1) +
                                  " outside [0,1]");
    }
    if (std::abs(values.sum() - 1.0) > tolerance)
        throw InvalidArgument("populations do not sum to 1");
}

Populations Populations::unchecked(const Vector7& values) {
    Populations p;
    p.values_ = values;
    return p;
}

double Populations::level(int n) const {
    if (n < 1 || n > static_cast<int>(kNumLevels)) throw OutOfRange("level index must be 1..7");
    return values_(n - 1);
}

RateMatrix build_rate_matrix(const NVParameters& params, const DrivingRates& k, Variant variant) {
    require_valid(params);

    RateMatrix out;
    out.variant = variant;
    Matrix7& m = out.m;

    auto transition = [&m](Level from, Level to, double rate) {
        m(static_cast<Eigen::Index>(index(to)), static_cast<Eigen::Index>(index(from))) += rate;
    };

    const double pump = k.k_pump_g + k.k_pump_r;
    transition(Level::ground_ms0, Level::excited_ms0, pump);
    transition(Level::ground_ms1, Level::excited_ms1, pump);

    transition(Level::excited_ms0, Level::ground_ms0, params.r31 + k.k_stim);
    transition(Level::excited_ms1, Level::ground_ms1, params.r42 + k.k_stim);
    transition(Level::excited_ms0, Level::singlet, params.r35);
    transition(Level::excited_ms1, Level::singlet, params.r45);
    transition(Level::singlet, Level::ground_ms0, params.r51);
    transition(Level::singlet, Level::ground_ms1, params.r52);

    if (variant == Variant::full) {
        const double ionization = k.k_ion_g + k.k_ion_r;
        const double recombination = k.k_rec_g + k.k_rec_r;
        transition(Level::excited_ms0, Level::nv0_ground, ionization);
        transition(Level::excited_ms1, Level::nv0_ground, ionization);
        transition(Level::singlet, Level::nv0_ground, k.k_ion_s);
        transition(Level::nv0_ground, Level::nv0_excited, k.k_pump_nv0);
        transition(Level::nv0_excited, Level::nv0_ground, params.r76 + k.k_stim_nv0);
        transition(Level::nv0_excited, Level::ground_ms0, 0.5 * recombination);
        transition(Level::nv0_excited, Level::ground_ms1, 0.5 * recombination);
    }

    // outflow on the diagonal
    for (Eigen::Index j = 0; j < 7; ++j) {
        double out_rate = 0;
        for (Eigen::Index i = 0; i < 7; ++i)
            if (i != j) out_rate += m(i, j);
        m(j, j) = -out_rate;
    }
    return out;
}

Vector7 residual(const RateMatrix& matrix, const Populations& p) {
    return matrix.m * p.vector();
}

namespace {

std::vector<int> active_levels(Variant variant) {
    const int n = variant == Variant::full ? 7 : 5;
    std::vector<int> levels(n);
    for (int i = 0; i < n; ++i) levels[i] = i;
    return levels;
}

// Closed communicating classes of the graph with edges j -> i where m(i,j) > 0.
std::vector<std::vector<int>> closed_classes(const RateMatrix& matrix) {
    const auto levels = active_levels(matrix.variant);
    const int n = static_cast<int>(levels.size());

    std::array<std::array<bool, 7>, 7> reach{};
    for (int a = 0; a < n; ++a) {
        reach[a][a] = true;
        for (int b = 0; b < n; ++b)
            if (a != b && matrix.m(levels[b], levels[a]) > 0) reach[a][b] = true;
    }
    for (int via = 0; via < n; ++via)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (reach[a][via] && reach[via][b]) reach[a][b] = true;

    std::vector<std::vector<int>> classes;
    std::array<bool, 7> assigned{};
    for (int a = 0; a < n; ++a) {
        if (assigned[a]) continue;
        std::vector<int> members;
        for (int b = 0; b < n; ++b) {
            if (reach[a][b] && reach[b][a]) {
                members.push_back(b);
                assigned[b] = true;
            }
        }
        bool closed = true;
        for (int b : members)
            for (int c = 0; c < n; ++c)
                if (reach[b][c] && std::find(members.begin(), members.end(), c) == members.end())
                    closed = false;
        if (closed) {
            for (int& b : members) b = levels[b];
            classes.push_back(std::move(members));
        }
    }
    return classes;
}

}  // namespace

int closed_class_count(const RateMatrix& matrix) {
    return static_cast<int>(closed_classes(matrix).size());
}

Populations steady_state(const RateMatrix& matrix, double tolerance) {
    const auto classes = closed_classes(matrix);
    if (classes.size() != 1)
        throw DegenerateSteadyState("rate matrix has " + std::to_string(classes.size()) +
                                    " closed classes; stationary state is not unique");

    const auto& cls = classes.front();
    const auto n = static_cast<Eigen::Index>(cls.size());

    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = matrix.m(cls[i], cls[j]);
    sub.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;

    const Eigen::VectorXd x = sub.fullPivLu().solve(rhs);

    Vector7 p = Vector7::Zero();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(x(i)) || x(i) < -tolerance)
            throw NumericalFailure("steady-state solve produced a negative population");
        p(cls[i]) = std::max(0.0, x(i));
    }
    p /= p.sum();

    const double scale = matrix.max_abs_entry();
    const double res = (matrix.m * p).cwiseAbs().maxCoeff();
    if (!(res < tolerance * scale))
        throw NumericalFailure("steady-state residual " + std::to_string(res) +
                               " exceeds tolerance");
    return Populations(p);
}

Populations evolve(const RateMatrix& matrix, const Populations& initial, double duration,
                   const EvolveOptions& options) {
    if (!(duration >= 0)) throw InvalidArgument("duration must be non-negative");
    if (duration == 0) return initial;

    Eigen::VectorXd y = initial.vector();
    const Eigen::MatrixXd a = matrix.m;
    if (!detail::integrate_linear_radau(a, y, duration, options.abs_tolerance,
                                        options.initial_step, options.max_steps))
        throw StepFailure("integrator could not meet the error tolerance");
    return Populations::unchecked(y);
}

}  // namespace nvcav
