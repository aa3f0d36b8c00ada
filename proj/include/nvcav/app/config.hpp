#pragma once

// Run configuration for the command-line tool.
//
// The configuration is a JSON document with the sections "parameters",
// "geometry", "sweep", "spectrum" and "io", written in laboratory units
// (MHz, mW, uW, nm, um, cm^-3 or ppm). Unknown keys are rejected. Values are
// converted to SI exactly once, in `RunConfig::from_json`.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvcav/errors.hpp"
#include "nvcav/experiments.hpp"
#include "nvcav/model.hpp"
#include "nvcav/spectroscopy.hpp"

namespace nvcav::app {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("IoError", message) {}
};

/// Diamond atomic number density (cm^-3) used for ppm conversion:
/// 1.7 ppm corresponds to 3e17 cm^-3.
inline constexpr double kDiamondAtomDensityCm3 = 3e17 / 1.7e-6;

struct SpectrumSettings {
    double refractive_index = kDiamondRefractiveIndex;
    double gamma = 0;  // s^-1, defaults to r31
    double lambda_min = 600e-9;
    double lambda_max = 850e-9;
    std::size_t points = 2000;
    double report_wavelength = 721e-9;
    std::vector<LorentzianPeak> initial_peaks;
    PeakFitOptions fit;
};

struct IoSettings {
    std::filesystem::path output_dir = ".";
    bool write_svg = false;
};

struct RunConfig {
    nlohmann::json document;  // effective configuration, laboratory units

    NVParameters params;
    CavityGeometry geometry;
    Variant variant = Variant::full;

    double point_green = 0;  // W, for `steady`
    double point_red = 0;
    std::vector<double> green_sweep;  // W, for `sweep-green`
    double sweep_red = 0;             // W
    std::vector<double> grid_green;   // W, for `sweep-grid`
    std::vector<double> grid_red;
    std::vector<double> cut_green;

    SpectrumSettings spectrum;
    IoSettings io;

    /// Default document merged with `overrides` (section-wise).
    static RunConfig from_json(const nlohmann::json& overrides);

    SweepConfig green_sweep_config() const;
    SweepConfig grid_config() const;
};

nlohmann::json default_config_document();

/// Reads a JSON config file, or a CSV produced by this tool whose metadata
/// carries a "# config: {...}" line.
nlohmann::json read_config_file(const std::filesystem::path& path);

}  // namespace nvcav::app
