#include "nvcav/app/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nvcav::app {

using nlohmann::json;

json default_config_document() {
    return json{
        {"parameters", json::object()},
        {"geometry", {{"spot_radius_um", 5.0}, {"F", 1200.0}, {"green_transmission", 0.6}}},
        {"sweep",
         {{"variant", "full"},
          {"point_green_mw", 50.0},
          {"point_red_uw", 67.0},
          {"green_mw", {{"from", 1.0}, {"to", 150.0}, {"count", 150}, {"spacing", "log"}}},
          {"red_uw", 67.0},
          {"grid_green_mw", {{"from", 1.0}, {"to", 150.0}, {"count", 150}, {"spacing", "linear"}}},
          {"grid_red_mw", {1.0, 5.0, 15.0, 47.0}},
          {"cut_green_mw", {25.0, 50.0, 75.0, 100.0}}}},
        {"spectrum",
         {{"refractive_index", kDiamondRefractiveIndex},
          {"lambda_min_nm", 600.0},
          {"lambda_max_nm", 850.0},
          {"points", 2000},
          {"report_nm", 721.0},
          {"max_iterations", 500},
          {"tolerance", 1e-12}}},
        {"io", {{"output_dir", "."}, {"formats", {"csv"}}}},
    };
}

namespace {

struct ParameterKey {
    const char* key;
    double NVParameters::*field;
    double scale;  // laboratory unit -> SI
};

constexpr double kMHz = 1e6;

const ParameterKey kParameterKeys[] = {
    {"r31_mhz", &NVParameters::r31, kMHz},
    {"r42_mhz", &NVParameters::r42, kMHz},
    {"r35_mhz", &NVParameters::r35, kMHz},
    {"r45_mhz", &NVParameters::r45, kMHz},
    {"r51_mhz", &NVParameters::r51, kMHz},
    {"r52_mhz", &NVParameters::r52, kMHz},
    {"r76_mhz", &NVParameters::r76, kMHz},
    {"sigma_g_m2", &NVParameters::sigma_g, 1.0},
    {"sigma_r_m2", &NVParameters::sigma_r, 1.0},
    {"sigma_se_m2", &NVParameters::sigma_se, 1.0},
    {"sigma_I_g_m2", &NVParameters::sigma_I_g, 1.0},
    {"sigma_I_r_m2", &NVParameters::sigma_I_r, 1.0},
    {"sigma_I_s_m2", &NVParameters::sigma_I_s, 1.0},
    {"sigma_R_g_m2", &NVParameters::sigma_R_g, 1.0},
    {"sigma_R_r_m2", &NVParameters::sigma_R_r, 1.0},
    {"xi", &NVParameters::xi, 1.0},
    {"eta", &NVParameters::eta, 1.0},
    {"beta", &NVParameters::beta, 1.0},
};

void reject_unknown(const json& section, const std::string& name,
                    const std::set<std::string>& allowed) {
    if (!section.is_object()) throw ConfigError("section '" + name + "' must be an object");
    for (const auto& [key, value] : section.items())
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
}

double number(const json& section, const std::string& key) {
    const auto& v = section.at(key);
    if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return v.get<double>();
}

// Division by an exact power of ten keeps e.g. 67 uW identical to 67e-6.
std::vector<double> power_list(const json& v, const std::string& key, double divisor) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& item : v) {
            if (!item.is_number()) throw ConfigError("'" + key + "' entries must be numbers");
            out.push_back(item.get<double>() / divisor);
        }
    } else if (v.is_object()) {
        reject_unknown(v, key, {"from", "to", "count", "spacing"});
        const double from = number(v, "from") / divisor;
        const double to = number(v, "to") / divisor;
        const auto count = v.at("count").get<std::size_t>();
        const std::string spacing = v.value("spacing", "linear");
        if (count == 0) throw ConfigError("'" + key + ".count' must be positive");
        if (spacing == "log") {
            if (!(from > 0)) throw ConfigError("log spacing needs a positive start in '" + key + "'");
            out = log_spaced(from, to, count);
        } else if (spacing == "linear") {
            out = linear_spaced(from, to, count);
        } else {
            throw ConfigError("'" + key + ".spacing' must be 'log' or 'linear'");
        }
    } else if (v.is_number()) {
        out.push_back(v.get<double>() / divisor);
    } else {
        throw ConfigError("'" + key + "' must be a number, a list or a range object");
    }
    return out;
}

void merge_sections(json& base, const json& overrides) {
    if (!overrides.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const auto& [name, section] : overrides.items()) {
        if (!base.contains(name)) throw ConfigError("unknown section '" + name + "'");
        if (!section.is_object()) throw ConfigError("section '" + name + "' must be an object");
        for (const auto& [key, value] : section.items()) base[name][key] = value;
    }
}

}  // namespace

RunConfig RunConfig::from_json(const json& overrides) {
    RunConfig cfg;
    cfg.document = default_config_document();
    merge_sections(cfg.document, overrides);
    const json& doc = cfg.document;

    try {
        // parameters
        const json& p = doc.at("parameters");
        std::set<std::string> allowed{"nv_density_cm3", "nv_density_ppm", "sample_length_um"};
        for (const auto& k : kParameterKeys) allowed.insert(k.key);
        reject_unknown(p, "parameters", allowed);
        cfg.params = default_parameters();
        for (const auto& k : kParameterKeys)
            if (p.contains(k.key)) cfg.params.*k.field = number(p, k.key) * k.scale;
        if (p.contains("nv_density_cm3") && p.contains("nv_density_ppm"))
            throw ConfigError("give the NV density either in cm^-3 or in ppm, not both");
        if (p.contains("nv_density_cm3")) cfg.params.rho_nv = number(p, "nv_density_cm3") * 1e6;
        if (p.contains("nv_density_ppm"))
            cfg.params.rho_nv = number(p, "nv_density_ppm") * 1e-6 * kDiamondAtomDensityCm3 * 1e6;
        if (p.contains("sample_length_um"))
            cfg.params.sample_length = number(p, "sample_length_um") / 1e6;

        const auto validation = validate(cfg.params);
        if (!validation.ok()) {
            std::string msg = "invalid parameters:";
            for (const auto& v : validation.violations) msg += " " + v.message + ";";
            throw ConfigError(msg);
        }

        // geometry
        const json& g = doc.at("geometry");
        reject_unknown(g, "geometry", {"spot_radius_um", "F", "green_transmission"});
        cfg.geometry.spot_radius = number(g, "spot_radius_um") / 1e6;
        cfg.geometry.field_enhancement_F = number(g, "F");
        cfg.geometry.green_transmission = number(g, "green_transmission");
        try {
            cfg.geometry.check();
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }

        // sweep
        const json& s = doc.at("sweep");
        reject_unknown(s, "sweep",
                       {"variant", "point_green_mw", "point_red_uw", "green_mw", "red_uw",
                        "grid_green_mw", "grid_red_mw", "cut_green_mw"});
        const std::string variant = s.at("variant").get<std::string>();
        if (variant == "full")
            cfg.variant = Variant::full;
        else if (variant == "nv_minus_only")
            cfg.variant = Variant::nv_minus_only;
        else
            throw ConfigError("sweep.variant must be 'full' or 'nv_minus_only'");
        cfg.point_green = number(s, "point_green_mw") / 1e3;
        cfg.point_red = number(s, "point_red_uw") / 1e6;
        cfg.green_sweep = power_list(s.at("green_mw"), "green_mw", 1e3);
        cfg.sweep_red = number(s, "red_uw") / 1e6;
        cfg.grid_green = power_list(s.at("grid_green_mw"), "grid_green_mw", 1e3);
        cfg.grid_red = power_list(s.at("grid_red_mw"), "grid_red_mw", 1e3);
        cfg.cut_green = power_list(s.at("cut_green_mw"), "cut_green_mw", 1e3);
        if (cfg.point_green < 0 || cfg.point_red < 0 || cfg.sweep_red < 0)
            throw ConfigError("powers must be non-negative");

        // spectrum
        const json& sp = doc.at("spectrum");
        reject_unknown(sp, "spectrum",
                       {"refractive_index", "gamma_mhz", "lambda_min_nm", "lambda_max_nm", "points",
                        "report_nm", "max_iterations", "tolerance", "initial_peaks"});
        cfg.spectrum.refractive_index = number(sp, "refractive_index");
        cfg.spectrum.gamma = sp.contains("gamma_mhz") ? number(sp, "gamma_mhz") * kMHz : cfg.params.r31;
        cfg.spectrum.lambda_min = number(sp, "lambda_min_nm") / 1e9;
        cfg.spectrum.lambda_max = number(sp, "lambda_max_nm") / 1e9;
        cfg.spectrum.points = sp.at("points").get<std::size_t>();
        cfg.spectrum.report_wavelength = number(sp, "report_nm") / 1e9;
        cfg.spectrum.fit.max_iterations = sp.at("max_iterations").get<int>();
        cfg.spectrum.fit.tolerance = number(sp, "tolerance");
        if (sp.contains("initial_peaks")) {
            for (const auto& row : sp.at("initial_peaks")) {
                if (!row.is_array() || row.size() != 3)
                    throw ConfigError("initial_peaks entries are [center_nm, amplitude, fwhm_nm]");
                cfg.spectrum.initial_peaks.push_back(
                    {row[0].get<double>() / 1e9, row[1].get<double>(), row[2].get<double>() / 1e9});
            }
        } else {
            cfg.spectrum.initial_peaks = nv_emission_peaks();
        }
        if (!(cfg.spectrum.refractive_index > 0) || !(cfg.spectrum.gamma > 0) ||
            cfg.spectrum.points < 2 || !(cfg.spectrum.lambda_min < cfg.spectrum.lambda_max))
            throw ConfigError("invalid spectrum settings");

        // io
        const json& io = doc.at("io");
        reject_unknown(io, "io", {"output_dir", "formats"});
        cfg.io.output_dir = io.at("output_dir").get<std::string>();
        for (const auto& f : io.at("formats")) {
            const auto name = f.get<std::string>();
            if (name == "svg")
                cfg.io.write_svg = true;
            else if (name != "csv")
                throw ConfigError("unknown output format '" + name + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

SweepConfig RunConfig::green_sweep_config() const {
    SweepConfig s;
    s.green_powers = green_sweep;
    s.red_powers = {sweep_red};
    s.geometry = geometry;
    s.params = params;
    s.variant = variant;
    return s;
}

SweepConfig RunConfig::grid_config() const {
    SweepConfig s;
    s.green_powers = grid_green;
    s.red_powers = grid_red;
    s.geometry = geometry;
    s.params = params;
    s.variant = variant;
    return s;
}

json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const std::string marker = "# config: ";
    if (text.rfind("#", 0) == 0 || text.find("\n" + marker) != std::string::npos) {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.rfind(marker, 0) == 0) {
                try {
                    return json::parse(line.substr(marker.size()));
                } catch (const json::exception& e) {
                    throw ConfigError(std::string("malformed config metadata: ") + e.what());
                }
            }
        }
        throw ConfigError("file has no '# config:' metadata line");
    }
    try {
        return json::parse(text, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
}

}  // namespace nvcav::app
