#include "nvcav/model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "nvcav/errors.hpp"

namespace nvcav {

NVParameters default_parameters() {
    NVParameters p;
    p.r31 = 63.93e6;
    p.r42 = p.r31;
    p.r35 = 7.93e6;
    p.r45 = 53.25e6;
    p.r51 = 0.98e6;
    p.r52 = 0.72e6;
    p.r76 = 0.74 * p.r31;

    p.sigma_se = 3.22e-21;
    p.sigma_g = 3.1e-21;
    p.sigma_r = 3e-24;
    p.sigma_I_g = 0.037 * p.sigma_g;
    p.sigma_R_g = 0.08 * p.sigma_g;
    p.sigma_I_r = 0.071 * p.sigma_se;
    p.sigma_R_r = 0.22 * p.sigma_se;
    p.sigma_I_s = 0.0215 * p.sigma_se;

    p.xi = 1.3;
    p.eta = 1.0 / 3.0;
    p.beta = p.r76 / p.r31;

    p.rho_nv = 3e23;          // 3e17 cm^-3
    p.sample_length = 50e-6;  // 50 um
    return p;
}

ValidationResult validate(const NVParameters& p) {
    ValidationResult result;
    auto add = [&](std::string code, std::string field, std::string message) {
        result.violations.push_back({std::move(code), std::move(field), std::move(message)});
    };

    const std::pair<const char*, double> rates[] = {
        {"r31", p.r31}, {"r42", p.r42}, {"r35", p.r35}, {"r45", p.r45},
        {"r51", p.r51}, {"r52", p.r52}, {"r76", p.r76},
    };
    for (const auto& [name, value] : rates) {
        if (!std::isfinite(value) || value < 0)
            add("negative_rate", name, std::string("negative rate ") + name);
    }

    const std::pair<const char*, double> cross_sections[] = {
        {"sigma_g", p.sigma_g},     {"sigma_r", p.sigma_r},     {"sigma_se", p.sigma_se},
        {"sigma_I_g", p.sigma_I_g}, {"sigma_I_r", p.sigma_I_r}, {"sigma_I_s", p.sigma_I_s},
        {"sigma_R_g", p.sigma_R_g}, {"sigma_R_r", p.sigma_R_r},
    };
    for (const auto& [name, value] : cross_sections) {
        if (!std::isfinite(value) || value < 0)
            add("negative_cross_section", name, std::string("negative cross-section ") + name);
    }

    if (!std::isfinite(p.xi) || p.xi <= 0)
        add("non_positive_ratio", "xi", "non-positive absorption ratio xi");
    if (!std::isfinite(p.eta) || p.eta < 0 || p.eta > 1)
        add("ratio_out_of_range", "eta", "stimulated-emission ratio eta outside [0,1]");
    if (!std::isfinite(p.beta) || p.beta <= 0)
        add("non_positive_ratio", "beta", "non-positive spontaneous-rate ratio beta");
    if (!std::isfinite(p.rho_nv) || p.rho_nv <= 0)
        add("non_positive_density", "rho_nv", "non-positive NV density");
    if (!std::isfinite(p.sample_length) || p.sample_length <= 0)
        add("non_positive_length", "sample_length", "non-positive sample length");
    return result;
}

void require_valid(const NVParameters& params) {
    const auto result = validate(params);
    if (result.ok()) return;
    std::string message = "invalid NV parameters:";
    for (const auto& v : result.violations) message += " " + v.message + ";";
    throw InvalidParameters(message);
}

void CavityGeometry::check() const {
    if (!(spot_radius > 0)) throw InvalidArgument("spot radius must be positive");
    if (!(field_enhancement_F >= 1)) throw InvalidArgument("field enhancement F must be >= 1");
    if (!(green_transmission > 0 && green_transmission <= 1))
        throw InvalidArgument("green transmission must lie in (0, 1]");
}

namespace {

double nominal_wavelength(Channel channel) {
    return channel == Channel::green ? kGreenWavelength : kRedWavelength;
}

}  // namespace

double intensity(const LaserDrive& drive, const CavityGeometry& geom, Channel channel) {
    if (!(drive.wavelength > 0)) throw InvalidArgument("drive wavelength must be positive");
    if (!(drive.input_power >= 0)) throw InvalidArgument("input power must be non-negative");
    if (std::abs(drive.wavelength / nominal_wavelength(channel) - 1.0) > 0.01)
        throw InvalidArgument("drive wavelength does not match the requested channel");
    geom.check();

    const double area = std::numbers::pi * geom.spot_radius * geom.spot_radius;
    const double scale =
        channel == Channel::red ? geom.field_enhancement_F : geom.green_transmission;
    return scale * drive.input_power / area;
}

double intensity(double input_power, const CavityGeometry& geom, Channel channel) {
    return intensity(LaserDrive{nominal_wavelength(channel), input_power}, geom, channel);
}

DrivingRates driving_rates(const NVParameters& p, double i_green, double i_red,
                           const PhysicalConstants& constants) {
    if (!(i_green >= 0) || !(i_red >= 0))
        throw InvalidArgument("intensities must be non-negative");

    // photon flux per unit area
    const double flux_g = i_green / constants.photon_energy(kGreenWavelength);
    const double flux_r = i_red / constants.photon_energy(kRedWavelength);

    DrivingRates k;
    k.k_pump_g = flux_g * p.sigma_g;
    k.k_pump_r = flux_r * p.sigma_r;
    k.k_stim = flux_r * p.sigma_se;
    k.k_ion_g = flux_g * p.sigma_I_g;
    k.k_ion_r = flux_r * p.sigma_I_r;
    k.k_ion_s = flux_r * p.sigma_I_s;
    k.k_rec_g = flux_g * p.sigma_R_g;
    k.k_rec_r = flux_r * p.sigma_R_r;
    k.k_pump_nv0 = flux_g * (p.xi * p.sigma_g);
    k.k_stim_nv0 = flux_r * (p.eta * p.sigma_se);
    return k;
}

}  // namespace nvcav
