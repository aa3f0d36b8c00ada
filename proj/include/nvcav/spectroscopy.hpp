#pragma once

// Emission-spectrum tools: multi-Lorentzian synthesis and fitting, and the
// Fuchtbauer-Ladenburg emission cross-section.

#include <cstddef>
#include <span>
#include <vector>

#include "nvcav/model.hpp"

namespace nvcav {

/// Sampled spectrum on a uniform, strictly increasing wavelength grid (m).
class Spectrum {
public:
    static constexpr double kSpacingTolerance = 1e-6;

    Spectrum(std::vector<double> wavelengths, std::vector<double> intensities,
             bool normalized = false);

    std::span<const double> wavelengths() const { return wavelengths_; }
    std::span<const double> intensities() const { return intensities_; }
    std::size_t size() const { return wavelengths_.size(); }
    /// Grid step (m); zero for a single-point spectrum.
    double spacing() const { return spacing_; }
    bool normalized() const { return normalized_; }

    /// Copy scaled so the maximum intensity is 1.
    Spectrum normalized_to_peak() const;

private:
    std::vector<double> wavelengths_;
    std::vector<double> intensities_;
    double spacing_ = 0;
    bool normalized_ = false;
};

struct LorentzianPeak {
    double center = 0;     // m
    double amplitude = 0;  // value at the centre
    double fwhm = 0;       // m
};

/// The eight-line decomposition of the NV emission band measured without
/// cavity mirrors: zero-phonon line plus seven phonon replicas.
std::vector<LorentzianPeak> nv_emission_peaks();

/// sum_i a_i (w_i/2)^2 / ((lambda - c_i)^2 + (w_i/2)^2).
double lorentzian_sum(double wavelength, std::span<const LorentzianPeak> peaks);

Spectrum synthesize_spectrum(std::span<const LorentzianPeak> peaks, double lambda_min,
                             double lambda_max, std::size_t n_points, bool normalize = false);

struct PeakFitOptions {
    int max_iterations = 500;
    double tolerance = 1e-12;  // relative cost change
};

struct PeakFitResult {
    std::vector<LorentzianPeak> peaks;
    double residual_norm = 0;  // RMS of (model - data)
    bool converged = false;    // false means NotConverged: result is still usable
    int iterations = 0;
    std::vector<double> cost_history;  // cost after each accepted step
};

/// Levenberg-Marquardt fit of (centre, amplitude, FWHM) for every peak with
/// amplitude >= 0 and FWHM > 0 enforced by projection. Throws
/// DegenerateJacobian when two centres fall within one grid step.
PeakFitResult fit_peaks(const Spectrum& spectrum, std::span<const LorentzianPeak> initial,
                        const PeakFitOptions& options = {});

inline constexpr double kDiamondRefractiveIndex = 2.4;

/// sigma(lambda) sampled on the spectrum grid.
struct CrossSectionCurve {
    std::vector<double> wavelengths;  // m
    std::vector<double> sigma;        // m^2
};

/// Fuchtbauer-Ladenburg: sigma = gamma lambda^5 I / (8 pi n^2 c S) with
/// S = sum lambda I dlambda (left-point rule). `gamma` is the radiative rate.
/// Throws ZeroSpectrum if S vanishes.
CrossSectionCurve fl_cross_section(const Spectrum& spectrum, double refractive_index,
                                   double gamma, const PhysicalConstants& constants = {});

/// Linear interpolation; OutOfRange outside the grid.
double cross_section_at(const CrossSectionCurve& curve, double wavelength);

}  // namespace nvcav
