#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "nvcav/app/cli.hpp"
#include "nvcav/app/config.hpp"
#include "nvcav/app/csv.hpp"
#include "nvcav/app/plot.hpp"
#include "nvcav/experiments.hpp"
#include "support.hpp"

using namespace nvcav;
using namespace nvcav::app;
using testsupport::fresh_dir;
using testsupport::slurp;

namespace {

struct Outcome {
    int status;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "nvcav");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

// Small sweep so the CLI tests stay fast.
std::filesystem::path small_config(const std::filesystem::path& dir) {
    const auto path = dir / "small.json";
    std::ofstream(path) << R"({"sweep": {"green_mw": {"from": 2, "to": 120, "count": 12, "spacing": "log"},
                              "grid_green_mw": [25, 50, 75, 100], "cut_green_mw": [25, 100]}})";
    return path;
}

}  // namespace

TEST_CASE("steady prints a normalised state") {
    const auto r = invoke({"steady", "--green-mw", "50", "--red-uw", "67"});
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("sum=1\n") != std::string::npos);
    const auto pt = evaluate_point(default_parameters(), CavityGeometry{}, Variant::full, 50e-3, 67e-6);
    CHECK(r.out.find("f_amp=" + format_number(pt.f_amp) + "\n") != std::string::npos);
}

TEST_CASE("sweep-green CSV equals direct library output") {
    const auto dir = fresh_dir("cli_golden");
    const auto r = invoke({"sweep-green", "--config", small_config(dir).string(), "--out", dir.string()});
    REQUIRE(r.status == kExitOk);
    const auto table = read_csv_file(dir / "sweep_green.csv");
    CHECK(table.header == kSweepColumns);
    REQUIRE(table.rows.size() == 12);

    SweepConfig cfg;
    cfg.green_powers = log_spaced(2e-3, 120e-3, 12);
    cfg.red_powers = {67e-6};
    const auto curve = sweep_green(cfg);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(table.rows[i][0] == format_number(curve[i].green_power * 1e3));
        CHECK(table.rows[i][2] == format_number(curve[i].f_amp));
        CHECK(table.rows[i][3] == format_number(curve[i].f_sp));
        CHECK(table.rows[i][7] == format_number(curve[i].nv_zero_total));
    }
}

TEST_CASE("reruns are byte-identical and the echoed config reproduces them") {
    const auto a = fresh_dir("cli_run_a");
    const auto b = fresh_dir("cli_run_b");
    const auto c = fresh_dir("cli_run_c");
    const auto config = small_config(a).string();
    for (const char* cmd : {"sweep-green", "sweep-grid", "xsection"}) {
        REQUIRE(invoke({cmd, "--config", config, "--out", a.string()}).status == kExitOk);
        REQUIRE(invoke({cmd, "--config", config, "--out", b.string()}).status == kExitOk);
    }
    for (const char* file : {"sweep_green.csv", "sweep_grid.csv", "line_cuts.csv",
                             "inverse_square_fits.csv", "spectrum.csv", "xsection.csv"}) {
        CAPTURE(file);
        CHECK(slurp(a / file) == slurp(b / file));
    }

    const auto from_csv = (a / "sweep_green.csv").string();
    REQUIRE(invoke({"sweep-green", "--config", from_csv, "--out", c.string()}).status == kExitOk);
    CHECK(slurp(c / "sweep_green.csv") == slurp(a / "sweep_green.csv"));
}

TEST_CASE("config overrides in laboratory units") {
    nlohmann::json doc = {{"parameters", {{"nv_density_ppm", 1.7}, {"r31_mhz", 60}}},
                          {"geometry", {{"spot_radius_um", 4}}}};
    const auto cfg = RunConfig::from_json(doc);
    CHECK(cfg.params.rho_nv == doctest::Approx(3e23));
    CHECK(cfg.params.r31 == 60e6);
    CHECK(cfg.geometry.spot_radius == 4e-6);
    CHECK(cfg.sweep_red == 67e-6);
    CHECK(cfg.green_sweep.size() == 150);
    CHECK(cfg.grid_red == std::vector<double>{1e-3, 5e-3, 15e-3, 47e-3});

    CHECK_THROWS_AS(RunConfig::from_json({{"parameters", {{"bogus", 1}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"nonsense", {{"x", 1}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"parameters", {{"sigma_g_m2", -1e-21}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"parameters", {{"nv_density_ppm", 1}, {"nv_density_cm3", 1e17}}}}),
                    ConfigError);
}

TEST_CASE("exit codes and machine-readable errors") {
    auto r = invoke({"steady", "--variant", "other"});
    CHECK(r.status == kExitConfig);
    CHECK(r.err.rfind("error code=ConfigError message=", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

    CHECK(invoke({"frobnicate"}).status == kExitConfig);
    CHECK(invoke({"steady", "--config", "/nonexistent/config.json"}).status == kExitIo);

    r = invoke({"steady", "--green-mw", "0", "--red-uw", "67"});
    CHECK(r.status == kExitSolver);
    CHECK(r.err.find("code=DegenerateSteadyState") != std::string::npos);

    const auto dir = fresh_dir("cli_errors");
    std::ofstream(dir / "bad.csv") << "wavelength_nm,intensity\n600,1\n601,2\n603,1\n";
    r = invoke({"fit-peaks", "--input", (dir / "bad.csv").string(), "--out", dir.string()});
    CHECK(r.status == kExitIo);
    CHECK(r.err.find("code=SchemaMismatch") != std::string::npos);

    CHECK(invoke({"--help"}).status == kExitOk);
}

TEST_CASE("xsection and fit-peaks round trip through files") {
    const auto dir = fresh_dir("cli_spectrum");
    auto r = invoke({"xsection", "--out", dir.string()});
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("sigma_se at 721 nm = 3.19") != std::string::npos);

    r = invoke({"xsection", "--input", (dir / "spectrum.csv").string(), "--n", "2.4", "--out", dir.string()});
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("sigma_se at 721 nm = 3.19") != std::string::npos);

    r = invoke({"fit-peaks", "--input", (dir / "spectrum.csv").string(), "--out", dir.string()});
    REQUIRE(r.status == kExitOk);
    const auto report = nlohmann::json::parse(slurp(dir / "fit_peaks.json"));
    CHECK(report["converged"].get<bool>());
    CHECK(report["peaks"].size() == 8);
    CHECK(report["peaks"][4]["center_nm"].get<double>() == doctest::Approx(721.0).epsilon(1e-9));
}

TEST_CASE("plots are deterministic and schema-checked") {
    const auto dir = fresh_dir("cli_plot");
    REQUIRE(invoke({"sweep-green", "--config", small_config(dir).string(), "--out", dir.string()}).status == kExitOk);
    const auto csv = (dir / "sweep_green.csv").string();
    REQUIRE(invoke({"plot", "--input", csv, "--output", (dir / "a.svg").string()}).status == kExitOk);
    REQUIRE(invoke({"plot", "--input", csv, "--output", (dir / "b.svg").string()}).status == kExitOk);
    const auto svg = slurp(dir / "a.svg");
    CHECK(svg == slurp(dir / "b.svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("stroke-dasharray=\"2,3\"") != std::string::npos);
    CHECK(invoke({"plot", "--input", csv, "--kind", "populations", "--output", (dir / "p.svg").string()}).status ==
          kExitOk);

    std::istringstream empty("# only metadata\ngreen_power_mW,f_amp,f_sp\n");
    CHECK_THROWS_AS(render_plot(read_csv(empty), PlotKind::amplification), SchemaMismatch);
    std::istringstream missing("green_power_mW,f_amp\n1,1.1\n");
    CHECK_THROWS_AS(render_plot(read_csv(missing), PlotKind::amplification), SchemaMismatch);
    CHECK(invoke({"plot", "--input", csv, "--kind", "pie"}).status == kExitIo);
}
