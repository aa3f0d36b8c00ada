#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "nvcav/errors.hpp"
#include "nvcav/experiments.hpp"

using namespace nvcav;

namespace {

SweepConfig grid_config(std::vector<double> green, std::vector<double> red) {
    SweepConfig c;
    c.green_powers = std::move(green);
    c.red_powers = std::move(red);
    return c;
}

bool same(const ObservablePoint& a, const ObservablePoint& b) {
    return a.green_power == b.green_power && a.red_power == b.red_power && a.f_amp == b.f_amp &&
           a.f_sp == b.f_sp && a.p_minus_excited == b.p_minus_excited &&
           a.p_zero_excited == b.p_zero_excited && a.nv_minus_total == b.nv_minus_total &&
           a.nv_zero_total == b.nv_zero_total;
}

}  // namespace

TEST_CASE("spacing helpers") {
    const auto lin = linear_spaced(1, 5, 5);
    CHECK(lin == std::vector<double>{1, 2, 3, 4, 5});
    const auto lg = log_spaced(1, 100, 3);
    CHECK(lg[1] == doctest::Approx(10));
    CHECK(lg.back() == 100);
    CHECK_THROWS_AS(log_spaced(0, 1, 3), InvalidArgument);
}

TEST_CASE("evaluate_point uses a red-free reference") {
    const auto p = evaluate_point(default_parameters(), CavityGeometry{}, Variant::full, 50e-3, 67e-6);
    CHECK(p.f_amp > 1);
    CHECK(p.nv_minus_total + p.nv_zero_total == doctest::Approx(1.0));
    CHECK(p.green_only.nv_zero_total < p.nv_zero_total);
    const auto dark_red = evaluate_point(default_parameters(), CavityGeometry{}, Variant::full, 50e-3, 0);
    CHECK(dark_red.f_sp == 1.0);
    CHECK(dark_red.f_amp > 1.0);
}

TEST_CASE("sweep_green preconditions") {
    auto c = grid_config({1e-3, 2e-3}, {67e-6, 1e-3});
    CHECK_THROWS_AS(sweep_green(c), InvalidArgument);
    c = grid_config({2e-3, 1e-3}, {67e-6});
    CHECK_THROWS_AS(sweep_green(c), InvalidArgument);
    c = grid_config({0, 1e-3}, {67e-6});
    CHECK_THROWS_AS(sweep_green(c), DegenerateSteadyState);
    c = grid_config({1e-3, 2e-3, 3e-3}, {67e-6});
    CHECK(sweep_green(c).size() == 3);
}

TEST_CASE("grid rows, failures and 1x1 consistency") {
    const auto g = sweep_grid(grid_config({0, 10e-3}, {1e-3, 5e-3}));
    REQUIRE(g.rows.size() == 4);
    CHECK(g.rows[0].green_power == 0);
    CHECK(g.rows[1].red_power == 5e-3);
    CHECK_FALSE(g.rows[0].ok());
    CHECK(g.rows[0].error_code == "DegenerateSteadyState");
    CHECK(g.rows[2].ok());
    CHECK(g.metadata.code_version == kCodeVersion);

    const auto single = sweep_grid(grid_config({20e-3}, {5e-3}));
    const auto curve = sweep_green(grid_config({20e-3}, {5e-3}));
    CHECK(same(*single.rows[0].point, curve[0]));
}

TEST_CASE("grid points are independent and reproducible") {
    const std::vector<double> green{10e-3, 40e-3};
    const auto a = sweep_grid(grid_config(green, {1e-3, 5e-3, 15e-3}));
    // lists must be strictly increasing, so independence is checked on a subset
    const auto b = sweep_grid(grid_config(green, {5e-3}));
    CHECK(same(*a.rows[1].point, *b.rows[0].point));
    CHECK(same(*a.rows[4].point, *b.rows[1].point));
    const auto again = sweep_grid(grid_config(green, {1e-3, 5e-3, 15e-3}));
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(same(*a.rows[i].point, *again.rows[i].point));
}

TEST_CASE("line cuts select one green power") {
    const auto g = sweep_grid(grid_config({10e-3, 40e-3}, {1e-3, 5e-3, 15e-3}));
    const auto cut = line_cut(g, 40e-3);
    REQUIRE(cut.size() == 3);
    CHECK(cut[0].f_amp == g.rows[3].point->f_amp);
    CHECK(cut[2].red_power == 15e-3);
    CHECK(std::is_sorted(cut.begin(), cut.end(),
                         [](const CutPoint& x, const CutPoint& y) { return x.red_power < y.red_power; }));
    CHECK_THROWS_AS(line_cut(g, 20e-3), NotInGrid);
}

TEST_CASE("inverse-square fit recovers exact data") {
    std::vector<CutPoint> pts;
    for (double p : {0.5e-3, 1e-3, 2e-3, 5e-3, 10e-3, 20e-3, 47e-3}) pts.push_back({p, 1 + 2 / std::pow(1 + p / 5e-3, 2)});
    const auto fit = fit_inverse_square(pts);
    CHECK(fit.converged);
    CHECK(fit.amplitude_A == doctest::Approx(2).epsilon(1e-3));
    CHECK(fit.scale_B == doctest::Approx(5e-3).epsilon(1e-3));
    CHECK(fit(5e-3) == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(fit.residual_norm < 1e-8);
}

TEST_CASE("inverse-square fit degenerate and invalid input") {
    std::vector<CutPoint> flat{{1e-3, 1}, {5e-3, 1}, {15e-3, 1}};
    const auto fit = fit_inverse_square(flat);
    CHECK(fit.amplitude_A == 0);
    CHECK(fit.scale_unconstrained);
    CHECK_THROWS_AS(fit_inverse_square(std::vector<CutPoint>{{1e-3, 1.2}, {2e-3, 1.1}}), InvalidArgument);
    CHECK_THROWS_AS(fit_inverse_square(std::vector<CutPoint>{{1e-3, 1.2}, {2e-3, 0.9}, {3e-3, 1.0}}),
                    InvalidArgument);
}
