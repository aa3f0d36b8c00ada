#include "nvcav/app/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "nvcav/app/config.hpp"
#include "nvcav/app/csv.hpp"
#include "nvcav/app/plot.hpp"
#include "nvcav/experiments.hpp"
#include "nvcav/kinetics.hpp"
#include "nvcav/observables.hpp"
#include "nvcav/spectroscopy.hpp"

namespace nvcav::app {

using nlohmann::json;

namespace {

struct Flags {
    std::string config_path;
    std::optional<double> green_mw, red_uw, F, n, gamma_mhz;
    std::optional<std::string> variant, out_dir;
    std::string input, kind = "amplification", output;
};

json overrides_from(const Flags& flags, const std::string& command) {
    json doc = flags.config_path.empty() ? json::object() : read_config_file(flags.config_path);
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    auto set = [&](const char* section, const char* key, const json& value) {
        if (!doc.contains(section)) doc[section] = json::object();
        doc[section][key] = value;
    };
    if (flags.green_mw) set("sweep", "point_green_mw", *flags.green_mw);
    if (flags.red_uw) set("sweep", command == "steady" ? "point_red_uw" : "red_uw", *flags.red_uw);
    if (flags.F) set("geometry", "F", *flags.F);
    if (flags.variant) set("sweep", "variant", *flags.variant);
    if (flags.n) set("spectrum", "refractive_index", *flags.n);
    if (flags.gamma_mhz) set("spectrum", "gamma_mhz", *flags.gamma_mhz);
    if (flags.out_dir) set("io", "output_dir", *flags.out_dir);
    return doc;
}

// The output directory is left out of the echoed config so that runs into
// different directories produce identical files.
std::vector<std::string> metadata(const RunConfig& cfg, const std::string& command) {
    json echo = cfg.document;
    echo["io"].erase("output_dir");
    const auto& p = cfg.params;
    std::vector<std::string> lines{
        fmt::format("nvcav {} {}", kCodeVersion, command),
        "config: " + echo.dump(),
        fmt::format("rates_per_s: r31={} r42={} r35={} r45={} r51={} r52={} r76={}",
                    format_number(p.r31), format_number(p.r42), format_number(p.r35),
                    format_number(p.r45), format_number(p.r51), format_number(p.r52),
                    format_number(p.r76)),
        fmt::format("cross_sections_m2: sigma_g={} sigma_r={} sigma_se={} sigma_I_g={} "
                    "sigma_I_r={} sigma_I_s={} sigma_R_g={} sigma_R_r={}",
                    format_number(p.sigma_g), format_number(p.sigma_r), format_number(p.sigma_se),
                    format_number(p.sigma_I_g), format_number(p.sigma_I_r),
                    format_number(p.sigma_I_s), format_number(p.sigma_R_g),
                    format_number(p.sigma_R_r)),
        fmt::format("ensemble: xi={} eta={} beta={} rho_nv_m3={} sample_length_m={}",
                    format_number(p.xi), format_number(p.eta), format_number(p.beta),
                    format_number(p.rho_nv), format_number(p.sample_length)),
        fmt::format("geometry: spot_radius_m={} F={} green_transmission={}",
                    format_number(cfg.geometry.spot_radius),
                    format_number(cfg.geometry.field_enhancement_F),
                    format_number(cfg.geometry.green_transmission)),
        fmt::format("steady_state_tolerance: {}", format_number(kSteadyStateTolerance)),
    };
    return lines;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& file, const std::filesystem::path& path) {
    file.close();
    if (!file) throw IoError("write failed for " + path.string());
}

int cmd_steady(const RunConfig& cfg, std::ostream& out) {
    const auto ig = intensity(cfg.point_green, cfg.geometry, Channel::green);
    const auto ir = intensity(cfg.point_red, cfg.geometry, Channel::red);
    const auto m = build_rate_matrix(cfg.params, driving_rates(cfg.params, ig, ir), cfg.variant);
    const auto p = steady_state(m);
    const auto pt = evaluate_point(cfg.params, cfg.geometry, cfg.variant, cfg.point_green, cfg.point_red);

    out << fmt::format("green_power_mW={} red_power_uW={}\n", format_number(cfg.point_green * 1e3),
                       format_number(cfg.point_red * 1e6));
    for (int level = 1; level <= static_cast<int>(kNumLevels); ++level)
        out << fmt::format("p{}={}\n", level, format_number(p.level(level)));
    out << fmt::format("sum={}\n", format_number(p.sum()));
    out << fmt::format("f_amp={}\nf_sp={}\n", format_number(pt.f_amp), format_number(pt.f_sp));
    out << fmt::format("nv_minus_total={}\nnv_zero_total={}\n", format_number(pt.nv_minus_total),
                       format_number(pt.nv_zero_total));
    return kExitOk;
}

int cmd_sweep_green(const RunConfig& cfg, std::ostream& out) {
    const auto curve = sweep_green(cfg.green_sweep_config());
    const auto path = cfg.io.output_dir / "sweep_green.csv";
    auto file = open_output(path);
    write_sweep_csv(file, metadata(cfg, "sweep-green"), curve);
    finish(file, path);
    out << fmt::format("wrote {} ({} rows)\n", path.string(), curve.size());
    if (cfg.io.write_svg) {
        for (auto [kind, name] : {std::pair{PlotKind::amplification, "amplification"},
                                  std::pair{PlotKind::populations, "populations"}}) {
            const auto svg = cfg.io.output_dir / fmt::format("sweep_green_{}.svg", name);
            emit_plot(path, kind, svg);
            out << fmt::format("wrote {}\n", svg.string());
        }
    }
    return kExitOk;
}

int cmd_sweep_grid(const RunConfig& cfg, std::ostream& out) {
    const auto grid = sweep_grid(cfg.grid_config());
    const auto meta = metadata(cfg, "sweep-grid");

    const auto grid_path = cfg.io.output_dir / "sweep_grid.csv";
    auto grid_file = open_output(grid_path);
    write_grid_csv(grid_file, meta, grid);
    finish(grid_file, grid_path);
    out << fmt::format("wrote {} ({} rows)\n", grid_path.string(), grid.rows.size());

    const auto cuts_path = cfg.io.output_dir / "line_cuts.csv";
    const auto fits_path = cfg.io.output_dir / "inverse_square_fits.csv";
    auto cuts_file = open_output(cuts_path);
    auto fits_file = open_output(fits_path);
    write_metadata(cuts_file, meta);
    write_metadata(fits_file, meta);
    write_csv_row(cuts_file, std::vector<std::string>{"green_power_mW", "red_power_mW", "f_amp", "fit_f_amp"});
    write_csv_row(fits_file, std::vector<std::string>{"green_power_mW", "amplitude_A", "scale_B_mW",
                                                      "residual_rms", "relative_residual", "converged"});
    for (double green : cfg.cut_green) {
        const auto cut = line_cut(grid, green);
        const auto fit = fit_inverse_square(cut);
        double peak = 0;
        for (const auto& c : cut) {
            peak = std::max(peak, c.f_amp - 1.0);
            write_csv_row(cuts_file, std::vector<std::string>{
                                         format_number(green * 1e3), format_number(c.red_power * 1e3),
                                         format_number(c.f_amp), format_number(fit(c.red_power))});
        }
        const double relative = peak > 0 ? fit.residual_norm / peak : 0.0;
        write_csv_row(fits_file, std::vector<std::string>{
                                     format_number(green * 1e3), format_number(fit.amplitude_A),
                                     fit.scale_unconstrained ? "" : format_number(fit.scale_B * 1e3),
                                     format_number(fit.residual_norm), format_number(relative),
                                     fit.converged ? "true" : "false"});
        out << fmt::format("cut {} mW: A={} B_mW={} relative_rms={}\n", format_number(green * 1e3),
                           format_number(fit.amplitude_A), format_number(fit.scale_B * 1e3),
                           format_number(relative));
    }
    finish(cuts_file, cuts_path);
    finish(fits_file, fits_path);
    out << fmt::format("wrote {}\nwrote {}\n", cuts_path.string(), fits_path.string());
    if (cfg.io.write_svg) {
        const auto svg = cfg.io.output_dir / "sweep_grid_red.svg";
        emit_plot(grid_path, PlotKind::red_dependence, svg);
        out << fmt::format("wrote {}\n", svg.string());
    }
    return kExitOk;
}

Spectrum configured_spectrum(const RunConfig& cfg) {
    return synthesize_spectrum(cfg.spectrum.initial_peaks, cfg.spectrum.lambda_min,
                               cfg.spectrum.lambda_max, cfg.spectrum.points);
}

int cmd_xsection(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    auto meta = metadata(cfg, "xsection");
    std::optional<Spectrum> spectrum;
    if (flags.input.empty()) {
        spectrum = configured_spectrum(cfg);
        meta.push_back("spectrum: synthesized from spectrum.initial_peaks");
        const auto spec_path = cfg.io.output_dir / "spectrum.csv";
        auto file = open_output(spec_path);
        write_spectrum_csv(file, meta, *spectrum);
        finish(file, spec_path);
        out << fmt::format("wrote {}\n", spec_path.string());
    } else {
        spectrum = read_spectrum_csv(flags.input);
        meta.push_back("spectrum: read from input file");
    }

    const auto curve = fl_cross_section(*spectrum, cfg.spectrum.refractive_index, cfg.spectrum.gamma);
    const auto path = cfg.io.output_dir / "xsection.csv";
    auto file = open_output(path);
    write_metadata(file, meta);
    write_csv_row(file, std::vector<std::string>{"wavelength_nm", "sigma_m2"});
    for (std::size_t i = 0; i < curve.wavelengths.size(); ++i)
        write_csv_row(file, std::vector<std::string>{format_number(curve.wavelengths[i] * 1e9),
                                                     format_number(curve.sigma[i])});
    finish(file, path);
    out << fmt::format("wrote {}\n", path.string());
    const double report = cross_section_at(curve, cfg.spectrum.report_wavelength);
    out << fmt::format("sigma_se at {} nm = {} m^2\n", format_number(cfg.spectrum.report_wavelength * 1e9),
                       format_number(report));
    return kExitOk;
}

int cmd_fit_peaks(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    if (flags.input.empty()) throw ConfigError("fit-peaks needs --input <spectrum.csv>");
    const auto spectrum = read_spectrum_csv(flags.input);
    const auto result = fit_peaks(spectrum, cfg.spectrum.initial_peaks, cfg.spectrum.fit);

    json report;
    json echo = cfg.document;
    echo["io"].erase("output_dir");
    report["config"] = echo;
    report["code_version"] = kCodeVersion;
    report["converged"] = result.converged;
    report["iterations"] = result.iterations;
    report["residual_rms"] = result.residual_norm;
    report["peaks"] = json::array();
    out << fmt::format("{:>4} {:>12} {:>12} {:>12}\n", "peak", "center_nm", "amplitude", "fwhm_nm");
    for (std::size_t i = 0; i < result.peaks.size(); ++i) {
        const auto& pk = result.peaks[i];
        report["peaks"].push_back(
            {{"center_nm", pk.center * 1e9}, {"amplitude", pk.amplitude}, {"fwhm_nm", pk.fwhm * 1e9}});
        out << fmt::format("{:>4} {:>12.4f} {:>12.5f} {:>12.4f}\n", i + 1, pk.center * 1e9,
                           pk.amplitude, pk.fwhm * 1e9);
    }
    out << fmt::format("residual_rms={} iterations={} converged={}\n",
                       format_number(result.residual_norm), result.iterations,
                       result.converged ? "true" : "false");
    if (!result.converged) out << "warning: NotConverged, the last iterate is reported\n";

    const auto path = cfg.io.output_dir / "fit_peaks.json";
    auto file = open_output(path);
    file << report.dump(2) << '\n';
    finish(file, path);
    out << fmt::format("wrote {}\n", path.string());
    return kExitOk;
}

int cmd_plot(const Flags& flags, std::ostream& out) {
    if (flags.input.empty()) throw ConfigError("plot needs --input <csv>");
    const auto kind = parse_plot_kind(flags.kind);
    std::filesystem::path svg = flags.output;
    if (svg.empty()) {
        svg = flags.input;
        svg.replace_extension(".svg");
    }
    emit_plot(flags.input, kind, svg);
    out << fmt::format("wrote {}\n", svg.string());
    return kExitOk;
}

void print_error(std::ostream& err, const std::string& code, std::string message) {
    for (auto& c : message)
        if (c == '\n' || c == '"') c = c == '"' ? '\'' : ' ';
    err << fmt::format("error code={} message=\"{}\"\n", code, message);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state photodynamics of NV centres in a seeded cavity", "nvcav"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config_path, "JSON config, or a CSV written by this tool");
        sub->add_option("--F", flags.F, "cavity field enhancement");
        sub->add_option("--variant", flags.variant, "full | nv_minus_only");
        sub->add_option("--out", flags.out_dir, "output directory");
    };

    auto* steady = app.add_subcommand("steady", "populations and observables at one power pair");
    add_common(steady);
    steady->add_option("--green-mw", flags.green_mw, "green input power (mW)");
    steady->add_option("--red-uw", flags.red_uw, "red input power (uW)");

    auto* sweep = app.add_subcommand("sweep-green", "sweep green power at fixed red power");
    add_common(sweep);
    sweep->add_option("--red-uw", flags.red_uw, "red input power (uW)");

    auto* grid = app.add_subcommand("sweep-grid", "green x red grid, line cuts and inverse-square fits");
    add_common(grid);

    auto* xsec = app.add_subcommand("xsection", "emission cross-section from a spectrum");
    add_common(xsec);
    xsec->add_option("--input", flags.input, "spectrum CSV (wavelength_nm, intensity)");
    xsec->add_option("--n", flags.n, "refractive index");
    xsec->add_option("--gamma-mhz", flags.gamma_mhz, "radiative rate (MHz)");

    auto* fit = app.add_subcommand("fit-peaks", "multi-Lorentzian fit of a spectrum");
    add_common(fit);
    fit->add_option("--input", flags.input, "spectrum CSV (wavelength_nm, intensity)")->required();

    auto* plot = app.add_subcommand("plot", "render a CSV written by this tool as SVG");
    plot->add_option("--input", flags.input, "CSV file")->required();
    plot->add_option("--kind", flags.kind, "amplification | populations | red");
    plot->add_option("--output", flags.output, "SVG path (default: input with .svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        print_error(err, "UsageError", e.what());
        return kExitConfig;
    }

    try {
        if (plot->parsed()) return cmd_plot(flags, out);

        const std::string command = app.get_subcommands().front()->get_name();
        const auto cfg = RunConfig::from_json(overrides_from(flags, command));
        if (command == "steady") return cmd_steady(cfg, out);
        if (command == "sweep-green") return cmd_sweep_green(cfg, out);
        if (command == "sweep-grid") return cmd_sweep_grid(cfg, out);
        if (command == "xsection") return cmd_xsection(cfg, flags, out);
        return cmd_fit_peaks(cfg, flags, out);
    } catch (const ConfigError& e) {
        print_error(err, e.code(), e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        print_error(err, e.code(), e.what());
        return kExitIo;
    } catch (const SchemaMismatch& e) {
        print_error(err, e.code(), e.what());
        return kExitIo;
    } catch (const Error& e) {
        print_error(err, e.code(), e.what());
        return kExitSolver;
    } catch (const std::filesystem::filesystem_error& e) {
        print_error(err, "IoError", e.what());
        return kExitIo;
    }
}

}  // namespace nvcav::app
