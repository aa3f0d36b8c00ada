#pragma once

// Seven-level NV-/NV0 rate equations: dp/dt = M p.

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "nvcav/model.hpp"

namespace nvcav {

inline constexpr std::size_t kNumLevels = 7;

/// Level numbering follows the usual NV scheme; the enumerator value is the
/// zero-based storage index (level n lives at index n-1).
enum class Level : std::size_t {
    ground_ms0 = 0,   // 1
    ground_ms1 = 1,   // 2
    excited_ms0 = 2,  // 3
    excited_ms1 = 3,  // 4
    singlet = 4,      // 5
    nv0_ground = 5,   // 6
    nv0_excited = 6,  // 7
};

constexpr std::size_t index(Level level) { return static_cast<std::size_t>(level); }

using Vector7 = Eigen::Matrix<double, 7, 1>;
using Matrix7 = Eigen::Matrix<double, 7, 7>;

/// Occupation fractions of the seven levels. Construction checks the simplex
/// invariant (components in [0,1], sum 1).
class Populations {
public:
    static constexpr double kSumTolerance = 1e-12;

    /// All population in `level`.
    static Populations pure(Level level);

    /// Validates `values` against the simplex to within `tolerance`.
    explicit Populations(const Vector7& values, double tolerance = kSumTolerance);

    double operator[](Level level) const { return values_(static_cast<Eigen::Index>(index(level))); }
    /// 1-based access matching the level numbers.
    double level(int n) const;

    const Vector7& vector() const { return values_; }
    double sum() const { return values_.sum(); }

    /// Wraps a vector without validation; used internally for integrator
    /// output which may carry tiny excursions outside the simplex.
    static Populations unchecked(const Vector7& values);

private:
    Populations() = default;
    Vector7 values_ = Vector7::Zero();
};

enum class Variant {
    full,           // charge-state switching included
    nv_minus_only,  // levels 6,7 decoupled
};

struct RateMatrix {
    Matrix7 m = Matrix7::Zero();  // m(i,j): rate j -> i, columns sum to zero
    Variant variant = Variant::full;

    double max_abs_entry() const { return m.cwiseAbs().maxCoeff(); }
};

/// Assembles the generator from the rate constants and optical drive.
/// Throws InvalidParameters if `params` fails validation.
RateMatrix build_rate_matrix(const NVParameters& params, const DrivingRates& rates,
                             Variant variant = Variant::full);

/// m p.
Vector7 residual(const RateMatrix& matrix, const Populations& p);

inline constexpr double kSteadyStateTolerance = 1e-12;

/// Unique stationary distribution of `matrix`.
///
/// The closed communicating classes of the transition graph are found first;
/// a single closed class is required, otherwise DegenerateSteadyState is
/// thrown (e.g. in the dark, levels 1, 2 and 6 are all absorbing). Transient
/// levels carry exactly zero population. On the closed class one balance row
/// is replaced by the normalisation and the system is solved directly. The
/// result must satisfy |m p|_inf < tolerance * max|m_ij|, else NumericalFailure.
///
/// In the nv_minus_only variant the NV0 levels are inert and excluded.
Populations steady_state(const RateMatrix& matrix, double tolerance = kSteadyStateTolerance);

/// Number of closed classes among the levels the variant keeps active
/// (1 iff the stationary state is unique).
int closed_class_count(const RateMatrix& matrix);

struct EvolveOptions {
    double abs_tolerance = 1e-13;
    double initial_step = 1e-12;  // s
    std::size_t max_steps = 200000;
};

/// Integrates dp/dt = m p over `duration` seconds with an L-stable implicit
/// Runge-Kutta scheme (3-stage Radau IIA) and step-doubling error control.
/// Throws StepFailure when the error control cannot be met.
Populations evolve(const RateMatrix& matrix, const Populations& initial, double duration,
                   const EvolveOptions& options = {});

}  // namespace nvcav
