#include "nvcav/observables.hpp"

#include "nvcav/errors.hpp"

namespace nvcav {

GainContext GainContext::from(const NVParameters& params, const CavityGeometry& geom) {
    return GainContext{geom.field_enhancement_F, params.sigma_se, params.eta,
                       params.beta,              params.rho_nv,   params.sample_length};
}

ChargeFractions charge_fractions(const Populations& p) {
    ChargeFractions c;
    c.nv_minus_total = p[Level::ground_ms0] + p[Level::ground_ms1] + p[Level::excited_ms0] +
                       p[Level::excited_ms1] + p[Level::singlet];
    c.nv_zero_total = p[Level::nv0_ground] + p[Level::nv0_excited];
    c.p_minus_excited = p[Level::excited_ms0] + p[Level::excited_ms1];
    c.p_zero_excited = p[Level::nv0_excited];
    return c;
}

double amplification_factor(const Populations& p, const GainContext& ctx) {
    const double excited =
        p[Level::excited_ms0] + p[Level::excited_ms1] + ctx.eta * p[Level::nv0_excited];
    return 1.0 + 0.5 * (excited * ctx.field_enhancement_F * ctx.sigma_se * ctx.rho_nv *
                        ctx.sample_length);
}

double spontaneous_factor(const Populations& with_red, const Populations& green_only,
                          double beta) {
    auto emitting = [beta](const Populations& p) {
        return p[Level::excited_ms0] + p[Level::excited_ms1] + beta * p[Level::nv0_excited];
    };
    const double denominator = emitting(green_only);
    if (!(denominator > 0))
        throw ZeroDenominator("no excited population under green-only pumping");
    return emitting(with_red) / denominator;
}

}  // namespace nvcav
