#include "nvcav/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "least_squares.hpp"
#include "nvcav/errors.hpp"

namespace nvcav {

ObservablePoint evaluate_point(const NVParameters& params, const CavityGeometry& geometry,
                               Variant variant, double green_power, double red_power) {
    const double i_green = intensity(green_power, geometry, Channel::green);
    const double i_red = intensity(red_power, geometry, Channel::red);

    const auto with_red =
        steady_state(build_rate_matrix(params, driving_rates(params, i_green, i_red), variant));
    const auto green_only =
        red_power == 0
            ? with_red
            : steady_state(build_rate_matrix(params, driving_rates(params, i_green, 0.0), variant));

    const auto charge = charge_fractions(with_red);
    ObservablePoint pt;
    pt.green_power = green_power;
    pt.red_power = red_power;
    pt.f_amp = amplification_factor(with_red, GainContext::from(params, geometry));
    pt.f_sp = spontaneous_factor(with_red, green_only, params.beta);
    pt.p_minus_excited = charge.p_minus_excited;
    pt.p_zero_excited = charge.p_zero_excited;
    pt.nv_minus_total = charge.nv_minus_total;
    pt.nv_zero_total = charge.nv_zero_total;
    pt.green_only = charge_fractions(green_only);
    return pt;
}

namespace {

void check_power_list(const std::vector<double>& powers, const char* name) {
    if (powers.empty()) throw InvalidArgument(std::string(name) + " list is empty");
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!(powers[i] >= 0) || !std::isfinite(powers[i]))
            throw InvalidArgument(std::string(name) + " powers must be non-negative");
        if (i > 0 && !(powers[i] > powers[i - 1]))
            throw InvalidArgument(std::string(name) + " powers must be strictly increasing");
    }
}

}  // namespace

void SweepConfig::check() const {
    check_power_list(green_powers, "green");
    check_power_list(red_powers, "red");
    geometry.check();
    require_valid(params);
}

std::vector<ObservablePoint> sweep_green(const SweepConfig& config) {
    config.check();
    if (config.red_powers.size() != 1)
        throw InvalidArgument("sweep_green needs exactly one red power");

    std::vector<ObservablePoint> curve;
    curve.reserve(config.green_powers.size());
    for (double green : config.green_powers)
        curve.push_back(evaluate_point(config.params, config.geometry, config.variant, green,
                                       config.red_powers.front()));
    return curve;
}

GridResult sweep_grid(const SweepConfig& config) {
    config.check();
    GridResult grid;
    grid.config = config;
    grid.rows.reserve(config.green_powers.size() * config.red_powers.size());
    for (double green : config.green_powers) {
        for (double red : config.red_powers) {
            GridRow row{green, red, std::nullopt, {}, {}};
            try {
                row.point = evaluate_point(config.params, config.geometry, config.variant, green, red);
            } catch (const Error& e) {
                row.error_code = e.code();
                row.error_message = e.what();
            }
            grid.rows.push_back(std::move(row));
        }
    }
    return grid;
}

std::vector<CutPoint> line_cut(const GridResult& grid, double green_power) {
    std::vector<CutPoint> cut;
    bool found = false;
    for (const auto& row : grid.rows) {
        if (std::abs(row.green_power - green_power) > 1e-9 * std::max(std::abs(green_power), 1e-30))
            continue;
        found = true;
        if (row.ok()) cut.push_back({row.red_power, row.point->f_amp});
    }
    if (!found) throw NotInGrid("green power not present in the grid");
    std::sort(cut.begin(), cut.end(),
              [](const CutPoint& a, const CutPoint& b) { return a.red_power < b.red_power; });
    return cut;
}

double LawFit::operator()(double red_power) const {
    if (scale_unconstrained) return 1.0 + amplitude_A;
    const double s = 1.0 + red_power / scale_B;
    return 1.0 + amplitude_A / (s * s);
}

LawFit fit_inverse_square(std::span<const CutPoint> points) {
    if (points.size() < 3) throw InvalidArgument("inverse-square fit needs at least 3 points");
    double p_max = 0, p_min_positive = std::numeric_limits<double>::infinity();
    bool all_unity = true;
    for (const auto& pt : points) {
        if (!(pt.f_amp >= 1) || !(pt.red_power >= 0))
            throw InvalidArgument("inverse-square fit needs f_amp >= 1 and red power >= 0");
        if (pt.f_amp != 1.0) all_unity = false;
        p_max = std::max(p_max, pt.red_power);
        if (pt.red_power > 0) p_min_positive = std::min(p_min_positive, pt.red_power);
    }

    LawFit fit;
    if (all_unity) {
        fit.amplitude_A = 0;
        fit.scale_unconstrained = true;
        return fit;
    }
    if (!(p_max > 0)) throw InvalidArgument("inverse-square fit needs a positive red power");

    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd power(n), excess(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        power(i) = points[i].red_power;
        excess(i) = points[i].f_amp - 1.0;
    }

    // B is fitted as log(B / b_ref); for fixed B the amplitude is linear.
    const double b_ref = p_max;
    auto shape = [&](double b) { return (1.0 + power.array() / b).square().inverse().matrix().eval(); };

    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::Vector2d x0(0, 0);
    const double lo = std::log(std::min(p_min_positive, p_max) / 100.0 / b_ref);
    const double hi = std::log(100.0);
    constexpr int kScan = 400;
    for (int k = 0; k <= kScan; ++k) {
        const double u = lo + (hi - lo) * k / kScan;
        const Eigen::VectorXd g = shape(b_ref * std::exp(u));
        const double a = std::max(0.0, g.dot(excess) / g.squaredNorm());
        const double sse = (a * g - excess).squaredNorm();
        if (sse < best_sse) {
            best_sse = sse;
            x0 << a, u;
        }
    }

    detail::LeastSquaresProblem problem;
    problem.residual = [&](const Eigen::VectorXd& x) {
        return (x(0) * shape(b_ref * std::exp(x(1))) - excess).eval();
    };
    problem.jacobian = [&](const Eigen::VectorXd& x) {
        const double b = b_ref * std::exp(x(1));
        const Eigen::ArrayXd s = 1.0 + power.array() / b;
        Eigen::MatrixXd jac(n, 2);
        jac.col(0) = s.square().inverse().matrix();
        // d/du [A s^-2] = 2 A s^-3 (P/B)
        jac.col(1) = (2.0 * x(0) * (power.array() / b) / s.cube()).matrix();
        return jac;
    };
    problem.project = [](Eigen::VectorXd& x) { x(0) = std::max(x(0), 0.0); };

    detail::LevenbergMarquardtOptions options;
    options.max_iterations = 500;
    options.relative_tolerance = 1e-14;
    const auto result = detail::levenberg_marquardt(problem, x0, options);

    fit.amplitude_A = result.x(0);
    fit.scale_B = b_ref * std::exp(result.x(1));
    fit.residual_norm = std::sqrt(2.0 * result.cost / static_cast<double>(n));
    fit.converged = result.converged && !result.singular && fit.scale_B > 0 &&
                    std::isfinite(fit.scale_B);
    return fit;
}

std::vector<double> linear_spaced(double first, double last, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {first};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.back() = last;
    return out;
}

std::vector<double> log_spaced(double first, double last, std::size_t count) {
    if (!(first > 0) || !(last > 0)) throw InvalidArgument("log spacing needs positive bounds");
    auto out = linear_spaced(std::log(first), std::log(last), count);
    for (double& v : out) v = std::exp(v);
    if (!out.empty()) {
        out.front() = first;
        out.back() = last;
    }
    return out;
}

}  // namespace nvcav
