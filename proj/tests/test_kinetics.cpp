#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "nvcav/errors.hpp"
#include "nvcav/kinetics.hpp"
#include "support.hpp"

using namespace nvcav;
using testsupport::matrix_at;

namespace {

double green_at_mw(double mw) { return intensity(mw * 1e-3, CavityGeometry{}, Channel::green); }
double red_at_uw(double uw) { return intensity(uw * 1e-6, CavityGeometry{}, Channel::red); }

}  // namespace

TEST_CASE("populations enforce the simplex") {
    Vector7 v = Vector7::Zero();
    v(0) = 0.5;
    v(3) = 0.5;
    const Populations p(v);
    CHECK(p.level(1) == 0.5);
    CHECK(p[Level::excited_ms1] == 0.5);
    CHECK_THROWS_AS(p.level(0), OutOfRange);
    CHECK_THROWS_AS(p.level(8), OutOfRange);
    v(0) = 0.6;
    CHECK_THROWS_AS(Populations{v}, InvalidArgument);
    v(0) = -0.1;
    v(3) = 1.1;
    CHECK_THROWS_AS(Populations{v}, InvalidArgument);
    CHECK(Populations::pure(Level::singlet).level(5) == 1.0);
}

TEST_CASE("rate matrix matches the level-by-level rate equations") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto q = testsupport::random_parameters(rng, 10.0);
        const double ig = testsupport::log_uniform(rng, 1e5, 1e10);
        const double ir = trial % 4 == 0 ? 0.0 : testsupport::log_uniform(rng, 1e5, 1e11);
        for (auto variant : {Variant::full, Variant::nv_minus_only}) {
            const auto m = matrix_at(q, ig, ir, variant).m;
            const auto oracle = testsupport::oracle_matrix(q, ig, ir, variant == Variant::full);
            const double scale = oracle.cwiseAbs().maxCoeff();
            CHECK((m - oracle).cwiseAbs().maxCoeff() <= 1e-13 * scale);
        }
    }
}

TEST_CASE("columns of the generator sum to zero") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const auto q = testsupport::random_parameters(rng, 10.0);
        const auto rm = matrix_at(q, testsupport::log_uniform(rng, 1e4, 1e10),
                                  testsupport::log_uniform(rng, 1e4, 1e11));
        const double scale = rm.max_abs_entry();
        for (int j = 0; j < 7; ++j) CHECK(std::abs(rm.m.col(j).sum()) <= 1e-15 * scale);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                if (i != j) CHECK(rm.m(i, j) >= 0);
    }
}

TEST_CASE("steady state is stationary and unique under green pumping") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto q = testsupport::random_parameters(rng, 5.0);
        const auto rm = matrix_at(q, testsupport::log_uniform(rng, 1e6, 1e10),
                                  testsupport::log_uniform(rng, 1e5, 1e11));
        CHECK(closed_class_count(rm) == 1);
        const auto p = steady_state(rm);
        CHECK(std::abs(p.sum() - 1.0) < 1e-12);
        CHECK(residual(rm, p).cwiseAbs().maxCoeff() < 1e-12 * rm.max_abs_entry());
        CHECK(p.vector().minCoeff() >= 0);
    }
}

TEST_CASE("dark conditions have several absorbing levels") {
    const auto rm = matrix_at(default_parameters(), 0, 0);
    CHECK(closed_class_count(rm) == 3);
    CHECK_THROWS_AS(steady_state(rm), DegenerateSteadyState);
}

TEST_CASE("red-only pumping empties into the NV0 ground state") {
    const auto p = steady_state(matrix_at(default_parameters(), 0, red_at_uw(67)));
    CHECK(p.level(6) == 1.0);
    for (int n : {1, 2, 3, 4, 5, 7}) CHECK(p.level(n) == 0.0);
}

TEST_CASE("nv_minus_only keeps the NV0 levels empty") {
    const auto rm = matrix_at(default_parameters(), green_at_mw(50), red_at_uw(67), Variant::nv_minus_only);
    const auto p = steady_state(rm);
    CHECK(p.level(6) == 0.0);
    CHECK(p.level(7) == 0.0);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.level(3) > 0);
}

TEST_CASE("evolve matches the matrix exponential") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = testsupport::random_parameters(rng, 3.0);
        const auto rm = matrix_at(q, testsupport::log_uniform(rng, 1e6, 1e9),
                                  testsupport::log_uniform(rng, 1e6, 1e10));
        const Populations p0(testsupport::random_simplex(rng));
        for (double t : {1e-9, 1e-7, 1e-5}) {
            const Eigen::Matrix<double, 7, 7> mt = rm.m * t;
            const Vector7 exact = mt.exp() * p0.vector();
            const auto p = evolve(rm, p0, t);
            CHECK((p.vector() - exact).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("evolve of a two-level exchange is exponential relaxation") {
    RateMatrix rm;
    const double a = 3e6, b = 1e6;
    rm.m(0, 0) = -a;
    rm.m(1, 0) = a;
    rm.m(0, 1) = b;
    rm.m(1, 1) = -b;
    const auto p = evolve(rm, Populations::pure(Level::ground_ms0), 2e-7);
    const double expected = b / (a + b) + a / (a + b) * std::exp(-(a + b) * 2e-7);
    CHECK(p.level(1) == doctest::Approx(expected).epsilon(1e-11));
    CHECK(evolve(rm, Populations::pure(Level::ground_ms1), 0.0).level(2) == 1.0);
    CHECK_THROWS_AS(evolve(rm, Populations::pure(Level::ground_ms1), -1.0), InvalidArgument);
}

TEST_CASE("dark decay from the excited state follows the branching ratios") {
    const auto q = default_parameters();
    const auto rm = matrix_at(q, 0, 0);
    const auto p = evolve(rm, Populations::pure(Level::excited_ms0), 1e-3);
    const double isc = q.r35 / (q.r31 + q.r35);
    const double to_ms0 = q.r51 / (q.r51 + q.r52);
    CHECK(p.level(1) == doctest::Approx((1 - isc) + isc * to_ms0).epsilon(1e-9));
    CHECK(p.level(2) == doctest::Approx(isc * (1 - to_ms0)).epsilon(1e-9));
    CHECK(p.level(6) == 0.0);
}

TEST_CASE("evolve conserves total population") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = testsupport::random_parameters(rng, 10.0);
        const auto rm = matrix_at(q, testsupport::log_uniform(rng, 1e4, 1e10),
                                  testsupport::log_uniform(rng, 1e4, 1e11));
        const auto p = evolve(rm, Populations(testsupport::random_simplex(rng)), 1e-3);
        CHECK(std::abs(p.sum() - 1.0) < 1e-9);
    }
}

TEST_CASE("long evolution reaches the steady state") {
    const auto rm = matrix_at(default_parameters(), green_at_mw(50), red_at_uw(67));
    const auto ss = steady_state(rm);
    const auto p = evolve(rm, Populations::pure(Level::nv0_ground), 1e-3);
    CHECK((p.vector() - ss.vector()).cwiseAbs().maxCoeff() < 1e-9);
}
