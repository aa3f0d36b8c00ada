#include "nvcav/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "least_squares.hpp"
#include "nvcav/errors.hpp"

namespace nvcav {

Spectrum::Spectrum(std::vector<double> wavelengths, std::vector<double> intensities,
                   bool normalized)
    : wavelengths_(std::move(wavelengths)),
      intensities_(std::move(intensities)),
      normalized_(normalized) {
    if (wavelengths_.size() != intensities_.size())
        throw InvalidArgument("spectrum wavelength and intensity arrays differ in length");
    for (double v : intensities_)
        if (!std::isfinite(v) || v < 0) throw InvalidArgument("spectrum intensities must be >= 0");
    if (normalized_ && !intensities_.empty() &&
        std::abs(*std::max_element(intensities_.begin(), intensities_.end()) - 1.0) > 1e-12)
        throw InvalidArgument("spectrum flagged normalised but peak is not 1");
    if (wavelengths_.size() < 2) return;

    const double span = wavelengths_.back() - wavelengths_.front();
    spacing_ = span / static_cast<double>(wavelengths_.size() - 1);
    if (!(spacing_ > 0)) throw InvalidArgument("spectrum wavelengths must increase");
    for (std::size_t i = 1; i < wavelengths_.size(); ++i) {
        const double step = wavelengths_[i] - wavelengths_[i - 1];
        if (!(step > 0)) throw InvalidArgument("spectrum wavelengths must be strictly increasing");
        if (std::abs(step - spacing_) > kSpacingTolerance * spacing_)
            throw InvalidArgument("spectrum grid is not uniform");
    }
}

Spectrum Spectrum::normalized_to_peak() const {
    const double peak =
        intensities_.empty() ? 0.0 : *std::max_element(intensities_.begin(), intensities_.end());
    if (!(peak > 0)) throw ZeroSpectrum("cannot normalise an all-zero spectrum");
    std::vector<double> scaled(intensities_);
    for (double& v : scaled) v /= peak;
    return Spectrum(wavelengths_, std::move(scaled), true);
}

std::vector<LorentzianPeak> nv_emission_peaks() {
    // centre nm, amplitude, FWHM nm
    constexpr double table[][3] = {
        {636.9, 0.1, 3.0},  {658.3, 0.3, 21.0}, {681.5, 0.6, 31.7}, {703.4, 0.6, 31.7},
        {721.0, 0.3, 30.4}, {739.0, 0.3, 31.7}, {758.5, 0.2, 33.1}, {782.3, 0.1, 30.4},
    };
    std::vector<LorentzianPeak> peaks;
    for (const auto& row : table) peaks.push_back({row[0] * 1e-9, row[1], row[2] * 1e-9});
    return peaks;
}

double lorentzian_sum(double wavelength, std::span<const LorentzianPeak> peaks) {
    double total = 0;
    for (const auto& pk : peaks) {
        const double half = 0.5 * pk.fwhm;
        const double d = wavelength - pk.center;
        total += pk.amplitude * half * half / (d * d + half * half);
    }
    return total;
}

Spectrum synthesize_spectrum(std::span<const LorentzianPeak> peaks, double lambda_min,
                             double lambda_max, std::size_t n_points, bool normalize) {
    if (n_points < 2) throw InvalidArgument("need at least two grid points");
    if (!(lambda_min < lambda_max)) throw InvalidArgument("lambda_min must be below lambda_max");
    for (const auto& pk : peaks)
        if (!(pk.amplitude >= 0) || !(pk.fwhm > 0)) throw InvalidArgument("invalid peak");

    std::vector<double> wl(n_points), in(n_points);
    const double step = (lambda_max - lambda_min) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        wl[i] = i + 1 == n_points ? lambda_max : lambda_min + static_cast<double>(i) * step;
        in[i] = lorentzian_sum(wl[i], peaks);
    }
    Spectrum s(std::move(wl), std::move(in));
    return normalize ? s.normalized_to_peak() : s;
}

namespace {

// Fitting runs in nanometres so all parameters are O(1..1e3).
constexpr double kNm = 1e-9;

void check_separation(std::span<const double> centers_nm, double spacing_nm) {
    for (std::size_t i = 0; i < centers_nm.size(); ++i)
        for (std::size_t j = i + 1; j < centers_nm.size(); ++j)
            if (std::abs(centers_nm[i] - centers_nm[j]) < spacing_nm)
                throw DegenerateJacobian("peaks " + std::to_string(i) + " and " +
                                         std::to_string(j) + " collapse onto one centre");
}

}  // namespace

PeakFitResult fit_peaks(const Spectrum& spectrum, std::span<const LorentzianPeak> initial,
                        const PeakFitOptions& options) {
    if (initial.empty()) throw InvalidArgument("fit_peaks needs at least one initial peak");
    if (spectrum.size() == 0) throw InvalidArgument("fit_peaks needs a non-empty spectrum");
    for (const auto& pk : initial)
        if (!(pk.amplitude >= 0) || !(pk.fwhm > 0)) throw InvalidArgument("invalid initial peak");

    const auto n_peaks = static_cast<Eigen::Index>(initial.size());
    const auto n_data = static_cast<Eigen::Index>(spectrum.size());
    Eigen::VectorXd lambda(n_data), data(n_data);
    for (Eigen::Index i = 0; i < n_data; ++i) {
        lambda(i) = spectrum.wavelengths()[i] / kNm;
        data(i) = spectrum.intensities()[i];
    }
    const double spacing_nm = spectrum.spacing() / kNm;
    const double min_fwhm = spacing_nm > 0 ? 1e-3 * spacing_nm : 1e-6;

    Eigen::VectorXd x(3 * n_peaks);
    std::vector<double> centers;
    for (Eigen::Index k = 0; k < n_peaks; ++k) {
        x(3 * k) = initial[k].center / kNm;
        x(3 * k + 1) = initial[k].amplitude;
        x(3 * k + 2) = initial[k].fwhm / kNm;
        centers.push_back(x(3 * k));
    }
    check_separation(centers, spacing_nm);

    detail::LeastSquaresProblem problem;
    problem.residual = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r = -data;
        for (Eigen::Index k = 0; k < n_peaks; ++k) {
            const double c = p(3 * k), a = p(3 * k + 1), h = 0.5 * p(3 * k + 2);
            r.array() += a * h * h / ((lambda.array() - c).square() + h * h);
        }
        return r;
    };
    problem.jacobian = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd jac(n_data, 3 * n_peaks);
        for (Eigen::Index k = 0; k < n_peaks; ++k) {
            const double c = p(3 * k), a = p(3 * k + 1), h = 0.5 * p(3 * k + 2);
            const Eigen::ArrayXd d = lambda.array() - c;
            const Eigen::ArrayXd denom = d.square() + h * h;
            const Eigen::ArrayXd denom2 = denom.square();
            jac.col(3 * k) = (2.0 * a * h * h * d / denom2).matrix();
            jac.col(3 * k + 1) = (h * h / denom).matrix();
            jac.col(3 * k + 2) = (a * h * d.square() / denom2).matrix();
        }
        return jac;
    };
    problem.project = [&](Eigen::VectorXd& p) {
        for (Eigen::Index k = 0; k < n_peaks; ++k) {
            p(3 * k + 1) = std::max(p(3 * k + 1), 0.0);
            p(3 * k + 2) = std::max(p(3 * k + 2), min_fwhm);
        }
    };

    detail::LevenbergMarquardtOptions lm;
    lm.max_iterations = options.max_iterations;
    lm.relative_tolerance = options.tolerance;
    const auto fit = detail::levenberg_marquardt(problem, x, lm);

    centers.clear();
    for (Eigen::Index k = 0; k < n_peaks; ++k) centers.push_back(fit.x(3 * k));
    check_separation(centers, spacing_nm);
    if (fit.singular) throw DegenerateJacobian("normal equations are singular");

    PeakFitResult result;
    for (Eigen::Index k = 0; k < n_peaks; ++k)
        result.peaks.push_back({fit.x(3 * k) * kNm, fit.x(3 * k + 1), fit.x(3 * k + 2) * kNm});
    result.residual_norm = std::sqrt(2.0 * fit.cost / static_cast<double>(n_data));
    result.converged = fit.converged;
    result.iterations = fit.iterations;
    result.cost_history = fit.accepted_costs;
    return result;
}

CrossSectionCurve fl_cross_section(const Spectrum& spectrum, double refractive_index,
                                   double gamma, const PhysicalConstants& constants) {
    if (spectrum.size() < 2) throw InvalidArgument("cross-section needs at least two points");
    if (!(refractive_index > 0)) throw InvalidArgument("refractive index must be positive");
    if (!(gamma > 0)) throw InvalidArgument("decay rate must be positive");

    const auto wl = spectrum.wavelengths();
    const auto in = spectrum.intensities();
    const double dl = spectrum.spacing();

    double weight = 0;
    for (std::size_t i = 0; i + 1 < wl.size(); ++i) weight += wl[i] * in[i] * dl;
    if (!(weight > 0)) throw ZeroSpectrum("spectrum has no emission weight");

    const double prefactor = gamma / (8.0 * std::numbers::pi * refractive_index *
                                      refractive_index * constants.light_speed * weight);
    CrossSectionCurve curve;
    curve.wavelengths.assign(wl.begin(), wl.end());
    curve.sigma.resize(wl.size());
    for (std::size_t i = 0; i < wl.size(); ++i)
        curve.sigma[i] = prefactor * std::pow(wl[i], 5) * in[i];
    return curve;
}

double cross_section_at(const CrossSectionCurve& curve, double wavelength) {
    const auto& wl = curve.wavelengths;
    if (wl.empty() || curve.sigma.size() != wl.size())
        throw InvalidArgument("malformed cross-section curve");
    if (!(wavelength >= wl.front() && wavelength <= wl.back()))
        throw OutOfRange("wavelength outside the cross-section grid");

    const auto upper = std::lower_bound(wl.begin(), wl.end(), wavelength);
    const auto i = static_cast<std::size_t>(upper - wl.begin());
    if (*upper == wavelength) return curve.sigma[i];
    const double t = (wavelength - wl[i - 1]) / (wl[i] - wl[i - 1]);
    return curve.sigma[i - 1] + t * (curve.sigma[i] - curve.sigma[i - 1]);
}

}  // namespace nvcav
