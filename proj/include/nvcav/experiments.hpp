#pragma once

// Power sweeps over the steady-state model and the red-power suppression fit.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nvcav/kinetics.hpp"
#include "nvcav/model.hpp"
#include "nvcav/observables.hpp"

namespace nvcav {

inline constexpr const char* kCodeVersion = "0.1.0";

struct ObservablePoint {
    double green_power = 0;  // W
    double red_power = 0;    // W
    double f_amp = 1;
    double f_sp = 1;
    double p_minus_excited = 0;
    double p_zero_excited = 0;
    double nv_minus_total = 0;
    double nv_zero_total = 0;
    ChargeFractions green_only;  // reference state with the red seed off
};

/// Steady state with and without the red seed at one (green, red) power pair.
ObservablePoint evaluate_point(const NVParameters& params, const CavityGeometry& geometry,
                               Variant variant, double green_power, double red_power);

struct SweepConfig {
    std::vector<double> green_powers;  // W, strictly increasing
    std::vector<double> red_powers;    // W, strictly increasing
    CavityGeometry geometry;
    NVParameters params = default_parameters();
    Variant variant = Variant::full;

    /// Throws InvalidArgument / InvalidParameters.
    void check() const;
};

/// Requires exactly one red power. Zero green power propagates
/// DegenerateSteadyState from the solver.
std::vector<ObservablePoint> sweep_green(const SweepConfig& config);

struct GridRow {
    double green_power = 0;
    double red_power = 0;
    std::optional<ObservablePoint> point;
    std::string error_code;  // empty on success
    std::string error_message;

    bool ok() const { return point.has_value(); }
};

struct GridMetadata {
    double steady_state_tolerance = kSteadyStateTolerance;
    std::string code_version = kCodeVersion;
};

struct GridResult {
    std::vector<GridRow> rows;  // green-major
    SweepConfig config;
    GridMetadata metadata;
};

/// Full Cartesian product; a failing point is recorded in its row.
GridResult sweep_grid(const SweepConfig& config);

struct CutPoint {
    double red_power = 0;  // W
    double f_amp = 1;
};

/// Constant-green slice ordered by red power. Matches green powers to a
/// relative 1e-9. Throws NotInGrid.
std::vector<CutPoint> line_cut(const GridResult& grid, double green_power);

/// f_amp(P_r) = 1 + A / (1 + P_r / B)^2.
struct LawFit {
    double amplitude_A = 0;
    double scale_B = 0;  // W
    double residual_norm = 0;  // RMS of f_amp residuals
    bool converged = false;
    bool scale_unconstrained = false;  // set when all f_amp == 1

    double operator()(double red_power) const;
};

/// Least-squares inverse-square suppression fit; needs >= 3 points with
/// f_amp >= 1.
LawFit fit_inverse_square(std::span<const CutPoint> points);

std::vector<double> linear_spaced(double first, double last, std::size_t count);
std::vector<double> log_spaced(double first, double last, std::size_t count);

}  // namespace nvcav
