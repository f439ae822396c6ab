#include <doctest.h>

#include <cmath>

#include "qppf/constants.hpp"
#include "qppf/decoherence.hpp"
#include "qppf/mathkit.hpp"
#include "qppf/mie.hpp"

using namespace qppf;
using namespace qppf::decoherence;
namespace cn = qppf::constants;

namespace {

std::shared_ptr<const material::Material> silica() {
    static auto m = std::make_shared<material::Material>(
        material::load_material(QPPF_DATA_DIR "/silica.mat"));
    return m;
}

material::GasSpecies hydrogen() {
    static auto g = material::load_gas(QPPF_DATA_DIR "/hydrogen.gas");
    return g;
}

ParticleSpec reference_sphere() {
    ParticleSpec p;
    p.radius = 60e-9;
    p.mat = silica();
    p.internal_temperature = 40.0;
    return p;
}

EnvironmentSpec reference_env(double pressure = 1e-11) {
    EnvironmentSpec env;
    env.temperature = 20.0;
    env.pressure = pressure;
    env.gas = hydrogen();
    return env;
}

std::shared_ptr<const material::Material> lossless_material() {
    auto m = std::make_shared<material::Material>();
    m->name = "lossless";
    m->density = 1850.0;
    m->specific_heat = 700.0;
    m->ionization_energy = 5e-19;
    m->omega = {1e10, 1e17};
    m->eps_re = {2.1, 2.1};
    m->eps_im = {0.0, 0.0};
    return m;
}

} // namespace

TEST_SUITE("decoherence.collisions") {

TEST_CASE("vanishes at zero pressure and is linear in pressure") {
    auto p = reference_sphere();
    CHECK(collision_rate(p, reference_env(0.0)) == 0.0);
    double g1 = collision_rate(p, reference_env(1e-11));
    double g2 = collision_rate(p, reference_env(2e-11));
    CHECK(g2 == doctest::Approx(2.0 * g1).epsilon(1e-12));
}

TEST_CASE("reference sphere rate matches the calibration anchor within factor 2") {
    double rate = collision_rate(reference_sphere(), reference_env());
    CHECK(rate > 1.1 / 2.0);
    CHECK(rate < 1.1 * 2.0);
}

} // TEST_SUITE

TEST_SUITE("decoherence.bb_rates") {

TEST_CASE("empty photon bath at T -> 0") {
    auto p = reference_sphere();
    auto r = bb_rates(p, 2e13, 0.0);
    CHECK(r.sca == 0.0);
    CHECK(r.abs == 0.0);
    CHECK(r.emi == 0.0);
}

TEST_CASE("lossless material neither absorbs nor emits") {
    ParticleSpec p;
    p.radius = 60e-9;
    p.mat = lossless_material();
    auto r = bb_rates(p, 2e13, 20.0);
    CHECK(std::abs(r.abs) < 1e-12 * r.sca);
    CHECK(std::abs(r.emi) < 1e-10 * r.sca);
}

TEST_CASE("golden fixture near the 20 K thermal peak") {
    auto p = reference_sphere();
    double omega = 3.0 * cn::k_boltzmann * 20.0 / cn::hbar; // ~ peak of omega^2 occupation
    auto r = bb_rates(p, omega, 20.0);
    CHECK(r.sca > 0.0);
    CHECK(r.abs > 0.0);
    CHECK(r.emi > 0.0);
    // frozen regression values for the bundled silica table
    CHECK(r.abs == doctest::Approx(2.42891e-07).epsilon(1e-3));
    CHECK(r.sca == doctest::Approx(5.10746e-13).epsilon(1e-3));
    CHECK(r.emi == doctest::Approx(1.62447e-06).epsilon(1e-3));
}

} // TEST_SUITE

TEST_SUITE("decoherence.internal_temperature") {

TEST_CASE("constant model holds its value") {
    auto p = reference_sphere();
    CHECK(internal_temperature(p, 0.0) == 40.0);
    CHECK(internal_temperature(p, 73.0) == 40.0);
}

TEST_CASE("radiative model with a lossless sphere stays flat") {
    ParticleSpec p;
    p.radius = 60e-9;
    p.mat = lossless_material();
    p.temp_model = ParticleSpec::TempModel::kRadiative;
    p.internal_temperature = 40.0;
    CHECK(internal_temperature(p, 100.0) == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("radiative cooling from 40 K is monotone and matches a halved-step oracle") {
    auto p = reference_sphere();
    p.temp_model = ParticleSpec::TempModel::kRadiative;
    double prev = internal_temperature(p, 0.0);
    CHECK(prev == doctest::Approx(40.0));
    for (double t : {1.0, 5.0, 20.0, 50.0, 100.0}) {
        double cur = internal_temperature(p, t);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    CHECK(internal_temperature(p, 100.0) < 40.0);

    // independent fixed-step RK4 oracle for T(10 s), two resolutions
    auto pc = p;
    pc.temp_model = ParticleSpec::TempModel::kConstant;
    auto deriv = [&pc](double T) {
        // dT/dt = -(1/(M c_m)) Int hbar w gamma_emi(w, T) dw
        double sum = 0.0;
        double lo = 1e11, hi = 45.0 * cn::k_boltzmann * 40.0 / cn::hbar;
        int panels = 400;
        for (int i = 0; i < panels; ++i) {
            double w = lo + (hi - lo) * (i + 0.5) / panels;
            auto r = bb_rates(pc, w, T);
            sum += r.emi * cn::hbar * w * (hi - lo) / panels;
        }
        return -sum / (pc.mass() * pc.mat->specific_heat);
    };
    auto march = [&](double h) {
        double T = 40.0;
        for (double t = 0.0; t < 10.0 - 1e-9; t += h) {
            double k1 = deriv(T);
            double k2 = deriv(T + 0.5 * h * k1);
            double k3 = deriv(T + 0.5 * h * k2);
            double k4 = deriv(T + h * k3);
            T += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        return T;
    };
    double coarse = march(1.0);
    double fine = march(0.5);
    CHECK(std::abs(fine - coarse) < 1e-6 * 40.0);
    CHECK(internal_temperature(p, 10.0) == doctest::Approx(fine).epsilon(2e-4));
}

} // TEST_SUITE

TEST_SUITE("decoherence.env_kernel") {

TEST_CASE("no decoherence sources give unity for all n") {
    ParticleSpec p;
    p.radius = 60e-9;
    p.mat = lossless_material();
    p.internal_temperature = 1e-3;
    EnvironmentSpec env;
    env.temperature = 1e-3; // empty bath
    env.pressure = 0.0;
    env.gas = hydrogen();
    EnvKernel k(p, env, 50e-9);
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    for (int n : {0, 1, 3, 9}) CHECK(k(n, pr) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("n = 0 is exactly one by the normalization convention") {
    EnvKernel k(reference_sphere(), reference_env(), 50e-9);
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    CHECK(k(0, pr) == 1.0);
}

TEST_CASE("bounded in (0, 1] and monotone in pressure, temperature, time") {
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    EnvKernel lo(reference_sphere(), reference_env(1e-13), 50e-9);
    EnvKernel hi(reference_sphere(), reference_env(1e-11), 50e-9);
    for (int n : {1, 2, 5}) {
        double klo = lo(n, pr), khi = hi(n, pr);
        CHECK(khi > 0.0);
        CHECK(khi <= 1.0);
        CHECK(khi <= klo + 1e-15);
    }
    // hotter environment decoheres more
    auto env_hot = reference_env();
    env_hot.temperature = 30.0;
    EnvKernel hot(reference_sphere(), env_hot, 50e-9);
    CHECK(hot(2, pr) < hi(2, pr));
    // longer flight decoheres more
    ProtocolSpec pr_long;
    pr_long.t1 = pr_long.t2 = 25.0;
    CHECK(hi(2, pr_long) < hi(2, pr));
}

TEST_CASE("symmetric under t1 <-> t2 with the physical time convention") {
    EnvKernel k(reference_sphere(), reference_env(), 50e-9);
    ProtocolSpec a, b;
    a.t1 = 14.0;
    a.t2 = 6.0;
    b.t1 = 6.0;
    b.t2 = 14.0;
    CHECK(k(2, a) == doctest::Approx(k(2, b)).epsilon(1e-12));

    // A scattering-dominated configuration (lossless sphere, warm bath)
    // exposes the time-factor convention: the literal printed (t1 - t2)
    // breaks the exchange symmetry and can push the kernel above one.
    ParticleSpec p;
    p.radius = 200e-9;
    p.mat = lossless_material();
    p.internal_temperature = 1.0;
    EnvironmentSpec env;
    env.temperature = 300.0;
    env.pressure = 0.0;
    env.gas = hydrogen();
    EnvKernel phys(p, env, 50e-9), lit(p, env, 50e-9, true);
    CHECK(phys(2, a) == doctest::Approx(phys(2, b)).epsilon(1e-12));
    CHECK(phys(2, a) < 1.0);
    double la = lit(2, a), lb = lit(2, b);
    CHECK(std::abs(la - lb) > 1e-6);
    CHECK(lb > 1.0); // t2 > t1 makes the literal exponent positive
}

TEST_CASE("decoherence brackets vanish at zero argument") {
    CHECK(mathkit::sine_integral_over_x(0.0) - 1.0 == doctest::Approx(0.0));
    // scattering bracket -a^2/9 leading order
    auto sca_bracket = [](double a) {
        return mathkit::sine_integral(2 * a) / a - std::pow(std::sin(a) / a, 2) - 1.0;
    };
    CHECK(sca_bracket(1e-4) == doctest::Approx(-1e-8 / 9.0).epsilon(1e-4));
    CHECK(std::abs(sca_bracket(1e-3)) < 1e-5);
}

TEST_CASE("brute-force quadrature oracle against the spectral tables") {
    auto p = reference_sphere();
    auto env = reference_env();
    EnvKernel k(p, env, 50e-9);
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    double s = harmonic_separation(1, pr, p.mass(), 50e-9);

    // direct adaptive quadrature of the same integrands
    mathkit::QuadratureSpec q;
    q.rel_tol = 1e-9;
    q.abs_tol = 1e-16;
    q.max_subdivisions = 4000;
    double tsum = pr.t1 + pr.t2;
    auto abs_sca_integrand = [&](double w) {
        auto r = bb_rates(p, w, env.temperature);
        double a = w * s / cn::c_light;
        double sinc = std::sin(a) / a;
        double br_abs = mathkit::sine_integral_over_x(a) - 1.0;
        double br_sca = mathkit::sine_integral(2 * a) / a - sinc * sinc - 1.0;
        return r.abs * br_abs + r.sca * br_sca;
    };
    double scale = cn::k_boltzmann * env.temperature / cn::hbar;
    double i_env = mathkit::integrate(abs_sca_integrand, 1e9, 45.0 * scale, q);
    auto emi_integrand = [&](double w) {
        auto r = bb_rates(p, w, p.internal_temperature);
        double a = w * s / cn::c_light;
        return r.emi * (mathkit::sine_integral_over_x(a) - 1.0);
    };
    double scale_i = cn::k_boltzmann * p.internal_temperature / cn::hbar;
    double i_int = mathkit::integrate(emi_integrand, 1e9, 45.0 * scale_i, q);
    double oracle = std::exp((i_env + i_int) * tsum);
    CHECK(k(1, pr) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("survival probability is the collisional attenuation") {
    EnvKernel k(reference_sphere(), reference_env(), 50e-9);
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    CHECK(k.survival_probability(pr) ==
          doctest::Approx(std::exp(-k.collision_rate() * 20.0)).epsilon(1e-12));
}

} // TEST_SUITE
