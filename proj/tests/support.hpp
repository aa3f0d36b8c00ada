#pragma once

// Shared helpers for the test binaries: seeded draws and an independent
// transcription of the rate equations used as an oracle.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "nvcav/kinetics.hpp"
#include "nvcav/model.hpp"

namespace testsupport {

using nvcav::NVParameters;

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

/// Every rate and cross-section scaled by an independent log-uniform factor
/// in [1/spread, spread]; ratios kept inside their valid ranges.
inline NVParameters random_parameters(std::mt19937_64& rng, double spread) {
    auto p = nvcav::default_parameters();
    for (double* v : {&p.r31, &p.r42, &p.r35, &p.r45, &p.r51, &p.r52, &p.r76, &p.sigma_g,
                      &p.sigma_r, &p.sigma_se, &p.sigma_I_g, &p.sigma_I_r, &p.sigma_I_s,
                      &p.sigma_R_g, &p.sigma_R_r, &p.xi, &p.rho_nv})
        *v *= log_uniform(rng, 1.0 / spread, spread);
    p.eta = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    p.beta = p.r76 / p.r31;
    return p;
}

/// Uniform draw from the 7-simplex (normalised exponentials).
inline nvcav::Vector7 random_simplex(std::mt19937_64& rng, int active = 7) {
    std::exponential_distribution<double> e(1.0);
    nvcav::Vector7 v = nvcav::Vector7::Zero();
    for (int i = 0; i < active; ++i) v(i) = e(rng);
    return v / v.sum();
}

/// dp/dt written level by level from the level scheme, intensities in W/m^2.
/// Stimulated emission depletes levels 3 and 4; recombination leaves level 7
/// and splits equally into levels 1 and 2.
inline std::array<double, 7> oracle_derivative(const NVParameters& q, double ig, double ir,
                                               bool charge_switching, const std::array<double, 7>& p) {
    const double h = 6.62607015e-34, c = 299792458.0;
    const double ng = ig / (h * c / 532e-9);  // photon flux, m^-2 s^-1
    const double nr = ir / (h * c / 721e-9);

    const double excite = ng * q.sigma_g + nr * q.sigma_r;
    const double stim = nr * q.sigma_se;
    const double s = charge_switching ? 1.0 : 0.0;
    const double ionize = s * (ng * q.sigma_I_g + nr * q.sigma_I_r);
    const double ionize_singlet = s * nr * q.sigma_I_s;
    const double recombine = s * (ng * q.sigma_R_g + nr * q.sigma_R_r);
    const double excite0 = s * ng * q.xi * q.sigma_g;
    const double relax0 = s * (q.r76 + nr * q.eta * q.sigma_se);

    const auto [p1, p2, p3, p4, p5, p6, p7] = p;
    return {
        -excite * p1 + (q.r31 + stim) * p3 + q.r51 * p5 + 0.5 * recombine * p7,
        -excite * p2 + (q.r42 + stim) * p4 + q.r52 * p5 + 0.5 * recombine * p7,
        -(q.r31 + stim + q.r35 + ionize) * p3 + excite * p1,
        -(q.r42 + stim + q.r45 + ionize) * p4 + excite * p2,
        -(q.r51 + q.r52 + ionize_singlet) * p5 + q.r35 * p3 + q.r45 * p4,
        -excite0 * p6 + relax0 * p7 + ionize_singlet * p5 + ionize * (p3 + p4),
        -(relax0 + recombine) * p7 + excite0 * p6,
    };
}

/// Generator assembled column by column from `oracle_derivative`.
inline nvcav::Matrix7 oracle_matrix(const NVParameters& q, double ig, double ir,
                                    bool charge_switching) {
    nvcav::Matrix7 m;
    for (int j = 0; j < 7; ++j) {
        std::array<double, 7> e{};
        e[static_cast<std::size_t>(j)] = 1.0;
        const auto col = oracle_derivative(q, ig, ir, charge_switching, e);
        for (int i = 0; i < 7; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
    }
    return m;
}

inline nvcav::RateMatrix matrix_at(const NVParameters& q, double ig, double ir,
                                   nvcav::Variant variant = nvcav::Variant::full) {
    return nvcav::build_rate_matrix(q, nvcav::driving_rates(q, ig, ir), variant);
}

inline std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("nvcav_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testsupport
