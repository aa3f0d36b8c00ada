#pragma once

// Physical parameters of the NV ensemble, laser/cavity geometry and the
// conversion of input laser powers into per-centre optical rates.
//
// All quantities are SI: W, m, s, m^2, m^-3. Laboratory units (mW, nm, MHz,
// ppm) are converted once at the configuration boundary.

#include <string>
#include <vector>

namespace nvcav {

struct PhysicalConstants {
    double planck_constant = 6.62607015e-34;  // J s
    double light_speed = 299792458.0;         // m/s

    double photon_energy(double wavelength) const {
        return planck_constant * light_speed / wavelength;
    }
};

inline constexpr double kGreenWavelength = 532e-9;
inline constexpr double kRedWavelength = 721e-9;

/// Rate constants (s^-1), cross-sections (m^2) and ensemble properties of
/// the seven-level NV-/NV0 scheme. Levels: 1,2 NV- ground (ms=0, ms=+-1);
/// 3,4 NV- excited; 5 NV- singlet; 6,7 NV0 ground/excited.
struct NVParameters {
    double r31 = 0;  // 3 -> 1 radiative
    double r42 = 0;  // 4 -> 2 radiative
    double r35 = 0;  // ISC
    double r45 = 0;  // ISC
    double r51 = 0;  // singlet -> ms=0
    double r52 = 0;  // singlet -> ms=+-1
    double r76 = 0;  // NV0 excited decay

    double sigma_g = 0;    // NV- absorption, 532 nm
    double sigma_r = 0;    // NV- absorption, 721 nm
    double sigma_se = 0;   // NV- stimulated emission, 721 nm
    double sigma_I_g = 0;  // excited-state ionization, green
    double sigma_I_r = 0;  // excited-state ionization, red
    double sigma_I_s = 0;  // singlet ionization, red
    double sigma_R_g = 0;  // recombination, green
    double sigma_R_r = 0;  // recombination, red

    double xi = 0;    // NV0/NV- green absorption ratio
    double eta = 0;   // NV0/NV- stimulated-emission ratio
    double beta = 0;  // NV0/NV- spontaneous-rate ratio

    double rho_nv = 0;         // m^-3
    double sample_length = 0;  // m
};

/// Literature parameter set used for all model figures.
NVParameters default_parameters();

struct Violation {
    std::string code;     // e.g. "negative_cross_section"
    std::string field;    // e.g. "sigma_g"
    std::string message;  // e.g. "negative cross-section sigma_g"
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

ValidationResult validate(const NVParameters& params);

/// Throws InvalidParameters listing every violation.
void require_valid(const NVParameters& params);

enum class Channel { green, red };

struct LaserDrive {
    double wavelength = 0;   // m
    double input_power = 0;  // W at the fibre input
};

struct CavityGeometry {
    double spot_radius = 5e-6;         // m, flat-top radius
    double field_enhancement_F = 1200;  // intra-cavity / input power, red seed
    double green_transmission = 0.6;    // fraction of green reaching the sample

    void check() const;
};

/// Flat-top intensity (W/m^2) inside the cylindrical mode volume.
/// Red: F P / (pi w^2). Green: T_g P / (pi w^2).
double intensity(const LaserDrive& drive, const CavityGeometry& geom, Channel channel);

/// Convenience overload at the nominal wavelength of `channel`.
double intensity(double input_power, const CavityGeometry& geom, Channel channel);

/// Per-centre optical rates in s^-1, each I sigma / (h nu).
struct DrivingRates {
    double k_pump_g = 0;
    double k_pump_r = 0;
    double k_stim = 0;
    double k_ion_g = 0;
    double k_ion_r = 0;
    double k_ion_s = 0;
    double k_rec_g = 0;
    double k_rec_r = 0;
    double k_pump_nv0 = 0;
    double k_stim_nv0 = 0;
};

DrivingRates driving_rates(const NVParameters& params, double i_green, double i_red,
                           const PhysicalConstants& constants = {});

}  // namespace nvcav
