#include <doctest.h>

#include <cmath>

#include "qppf/constants.hpp"
#include "qppf/noninterf.hpp"

using namespace qppf;
using namespace qppf::noninterf;
namespace cn = qppf::constants;

namespace {

std::shared_ptr<const material::Material> silica() {
    static auto m = std::make_shared<material::Material>(
        material::load_material(QPPF_DATA_DIR "/silica.mat"));
    return m;
}

Calculator reference_calculator(double pressure = 1e-11) {
    ParticleSpec p;
    p.radius = 60e-9;
    p.mat = silica();
    p.internal_temperature = 40.0;
    EnvironmentSpec env;
    env.temperature = 20.0;
    env.pressure = pressure;
    env.gas = material::load_gas(QPPF_DATA_DIR "/hydrogen.gas");
    return Calculator(p, env);
}

} // namespace

TEST_SUITE("noninterf.decoherence_function") {

TEST_CASE("vanishes at zero and is monotone non-decreasing") {
    auto calc = reference_calculator();
    CHECK(calc.decoherence_function(0.0) == 0.0);
    double prev = 0.0;
    for (double x = 1e-9; x < 1.5e-3; x *= 2.0) {
        double g = calc.decoherence_function(x);
        CHECK(g >= prev);
        prev = g;
    }
}

TEST_CASE("gas plateau matches the collision-rate anchor within factor 2") {
    auto calc = reference_calculator();
    // in the (1 nm, 1 mm) window the gas term has saturated
    double plateau = calc.decoherence_function(1e-5) - calc.lambda_blackbody() * 1e-10;
    CHECK(plateau > 1.1 / 2.0);
    CHECK(plateau < 1.1 * 2.0);
    CHECK(plateau == doctest::Approx(calc.collision_rate()).epsilon(1e-6));
}

TEST_CASE("blackbody coefficient matches the anchor within factor 3") {
    auto calc = reference_calculator();
    CHECK(calc.lambda_blackbody() > 4.9e12 / 3.0);
    CHECK(calc.lambda_blackbody() < 4.9e12 * 3.0);
}

TEST_CASE("quadratic regime below the gas correlation length") {
    auto calc = reference_calculator();
    double x = 1e-12; // well below hbar/(m_g v_g) ~ 0.1 nm
    double expected = (calc.lambda_gas() + calc.lambda_blackbody()) * x * x;
    CHECK(calc.decoherence_function(x) == doctest::Approx(expected).epsilon(1e-3));
}

} // TEST_SUITE

TEST_SUITE("noninterf.variance") {

TEST_CASE("trivial limits and cubic time scaling") {
    double m = 1e-18;
    CHECK(variance_growth(0.0, m, 50.0) == 0.0);
    double v1 = variance_growth(1e10, m, 10.0);
    double v2 = variance_growth(1e10, m, 20.0);
    CHECK(v2 == doctest::Approx(8.0 * v1).epsilon(1e-12));
}

TEST_CASE("budget components are non-negative and sum to the total") {
    auto calc = reference_calculator();
    auto b = calc.budget(CslParams{1e-10, 1e-7}, DpParams{0.5e-10});
    CHECK(b.gas >= 0.0);
    CHECK(b.blackbody >= 0.0);
    CHECK(b.csl >= 0.0);
    CHECK(b.dp >= 0.0);
    CHECK(b.total == doctest::Approx(b.gas + b.blackbody + b.csl + b.dp).epsilon(1e-12));
    // linear in each source
    auto b2 = calc.budget(CslParams{2e-10, 1e-7});
    CHECK(b2.csl == doctest::Approx(2.0 * b.csl).epsilon(1e-12));
}

} // TEST_SUITE

TEST_SUITE("noninterf.statistical_limit") {

TEST_CASE("reference anchor within factor 2") {
    double mass = 4.0 / 3.0 * cn::pi * std::pow(60e-9, 3) * 1850.0;
    double dxf = statistical_limit(1e5, 100.0, 30.0 * 86400.0, mass);
    CHECK(dxf > 3e-5 / 2.0);
    CHECK(dxf < 3e-5 * 2.0);
}

TEST_CASE("vanishes with infinite averaging time; t^(5/4) scaling") {
    double mass = 1.7e-18;
    CHECK(statistical_limit(1e5, 100.0, 1e18, mass) < 1e-7);
    // T^{-1/4} decay toward zero
    CHECK(statistical_limit(1e5, 100.0, 1.6e19, mass) /
              statistical_limit(1e5, 100.0, 1e18, mass) ==
          doctest::Approx(0.5).epsilon(1e-12));
    double a = statistical_limit(1e5, 10.0, 1e8, mass);
    double b = statistical_limit(1e5, 20.0, 1e8, mass);
    CHECK(b / a == doctest::Approx(std::pow(2.0, 1.25)).epsilon(1e-12));
}

} // TEST_SUITE

TEST_SUITE("noninterf.accel_noise") {

TEST_CASE("section 2.2 anchor within 2 percent") {
    CHECK(accel_noise_requirement(1e-6, 100.0) == doctest::Approx(3.5e-10).epsilon(0.02));
}

TEST_CASE("linear in d and T^{-3/2}") {
    double r1 = accel_noise_requirement(1e-6, 100.0);
    CHECK(accel_noise_requirement(2e-6, 100.0) == doctest::Approx(2.0 * r1).epsilon(1e-12));
    CHECK(r1 / accel_noise_requirement(1e-6, 800.0) ==
          doctest::Approx(std::sqrt(512.0)).epsilon(1e-12));
}

} // TEST_SUITE

TEST_SUITE("noninterf.bounds") {

TEST_CASE("environment-limited bound is linear in the environmental diffusion") {
    auto hi = reference_calculator(1e-11);
    auto lo = reference_calculator(0.5e-11);
    // gas dominates the budget here, so halving pressure nearly halves the bound
    double bh = hi.csl_bound(1e-7, BoundMode::kEnvironmentLimited);
    double bl = lo.csl_bound(1e-7, BoundMode::kEnvironmentLimited);
    double gas_ratio = lo.lambda_gas() / hi.lambda_gas();
    double expected = (lo.lambda_gas() + lo.lambda_blackbody()) /
                      (hi.lambda_gas() + hi.lambda_blackbody());
    CHECK(gas_ratio == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(bl / bh == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("bound curve has the characteristic U shape over the r_c sweep") {
    auto calc = reference_calculator();
    std::vector<double> grid;
    for (double rc = 1e-9; rc < 1.1e-3; rc *= 1.5) grid.push_back(rc);
    auto curve = bound_curve(calc, grid, BoundMode::kEnvironmentLimited);
    double vmin = 1e300;
    size_t imin = 0;
    for (size_t i = 0; i < curve.lambda_min.size(); ++i) {
        CHECK(curve.lambda_min[i] > 0.0);
        CHECK(std::isfinite(curve.lambda_min[i]));
        if (curve.lambda_min[i] < vmin) {
            vmin = curve.lambda_min[i];
            imin = i;
        }
    }
    CHECK(imin > 0);
    CHECK(imin < curve.lambda_min.size() - 1);
    CHECK(curve.lambda_min.front() > 10.0 * vmin);
    CHECK(curve.lambda_min.back() > 10.0 * vmin);
    // minimum near the particle-size scale
    CHECK(curve.rc[imin] > 1e-8);
    CHECK(curve.rc[imin] < 1e-5);
}

TEST_CASE("statistics-limited curve lies below the environment-limited one") {
    auto env_calc = reference_calculator(1e-11);
    auto stat_calc = reference_calculator(3e-14);
    for (double rc = 1e-9; rc < 1.1e-3; rc *= 4.0) {
        double be = env_calc.csl_bound(rc, BoundMode::kEnvironmentLimited);
        double bs = stat_calc.csl_bound(rc, BoundMode::kStatisticsLimited);
        CHECK(bs < be);
    }
}

} // TEST_SUITE
