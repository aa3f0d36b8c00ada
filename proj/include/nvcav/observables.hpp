#pragma once

#include "nvcav/kinetics.hpp"
#include "nvcav/model.hpp"

namespace nvcav {

/// Ensemble and cavity quantities entering the gain expression.
struct GainContext {
    double field_enhancement_F = 0;
    double sigma_se = 0;  // m^2
    double eta = 0;
    double beta = 0;
    double rho_nv = 0;         // m^-3
    double sample_length = 0;  // m

    static GainContext from(const NVParameters& params, const CavityGeometry& geom);
};

struct ChargeFractions {
    double nv_minus_total = 0;   // p1..p5
    double nv_zero_total = 0;    // p6 + p7
    double p_minus_excited = 0;  // p3 + p4
    double p_zero_excited = 0;   // p7
};

ChargeFractions charge_fractions(const Populations& p);

/// 1 + (p3 + p4 + eta p7) F sigma_se rho l / 2. Only half of the stimulated
/// power leaves through the collection mirror.
double amplification_factor(const Populations& p, const GainContext& ctx);

/// (p3 + p4 + beta p7) / (p3' + p4' + beta p7') where primes denote the
/// green-only steady state. Throws ZeroDenominator if nothing is excited
/// under green-only pumping.
double spontaneous_factor(const Populations& with_red, const Populations& green_only, double beta);

}  // namespace nvcav
