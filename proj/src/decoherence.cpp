#include "qppf/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "qppf/mie.hpp"

namespace qppf::decoherence {

using constants::c_light;
using constants::hbar;
using constants::k_boltzmann;
using constants::pi;

namespace {

// Saturated van der Waals collision rate prefactor,
// 4 pi * 5 * Gamma(9/10) / sin(pi/5).
const double kCollisionPrefactor = 20.0 * pi * std::tgamma(0.9) / std::sin(pi / 5.0);

std::complex<double> relative_index(const ParticleSpec& p, double omega) {
    std::complex<double> m = std::sqrt(material::permittivity(*p.mat, omega));
    return m.imag() < 0.0 ? -m : m;
}

double planck_occupation(double omega, double temperature) {
    if (!(temperature > 0.0)) return 0.0;
    double y = hbar * omega / (k_boltzmann * temperature);
    if (y > 700.0) return 0.0;
    if (y < 1e-8) return 1.0 / y; // expansion of 1/(e^y - 1)
    return 1.0 / (std::expm1(y));
}

// Time-averaged decoherence brackets (separation ramps linearly along each
// free-fall leg). All are <= 0 and vanish as a -> 0.
double bracket_absorption(double a) { return mathkit::sine_integral_over_x(a) - 1.0; }

double bracket_scattering(double a) {
    double aa = std::abs(a);
    if (aa < 1e-3) {
        double a2 = a * a;
        return -a2 / 9.0 + 2.0 * a2 * a2 / 225.0;
    }
    double sinc = std::sin(aa) / aa;
    return mathkit::sine_integral(2.0 * aa) / aa - sinc * sinc - 1.0;
}

double sinc(double x) {
    double ax = std::abs(x);
    if (ax < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(ax) / ax;
}

} // namespace

double collision_rate(const ParticleSpec& p, const EnvironmentSpec& env) {
    p.validate();
    env.validate();
    if (env.pressure == 0.0) return 0.0;
    double c6 = material::c6_coefficient(*p.mat, p.radius, env.gas);
    double vg = env.gas_mean_velocity();
    double number_density = env.pressure / (k_boltzmann * env.temperature);
    return kCollisionPrefactor * std::pow(3.0 * pi * c6 / (2.0 * hbar), 0.4) *
           number_density * std::pow(vg, 0.6);
}

BbRates bb_rates(const ParticleSpec& p, double omega, double temperature) {
    p.validate();
    if (!(omega > 0.0)) throw DomainError("bb_rates: omega must be > 0");
    if (temperature < 0.0) throw DomainError("bb_rates: temperature must be >= 0");
    auto cs = mie::cross_sections(mie::solve_mie(p.radius, omega / c_light, relative_index(p, omega)));
    double mode = omega / (pi * c_light);
    mode *= mode;
    BbRates r;
    double occ = planck_occupation(omega, temperature);
    r.sca = mode * cs.sca * occ;
    r.abs = mode * cs.abs * occ;
    double y = temperature > 0.0 ? hbar * omega / (k_boltzmann * temperature) : 1e9;
    r.emi = y > 700.0 ? 0.0 : mode * cs.abs * std::exp(-y);
    return r;
}

// ---------------------------------------------------------------------------
// Spectral tables
// ---------------------------------------------------------------------------

EnvKernel::SpectralTable EnvKernel::build_table(double temperature_scale) const {
    SpectralTable t;
    double scale = k_boltzmann * temperature_scale / hbar;
    double omega_hi = 45.0 * scale;

    // panel boundaries: a fixed log-ish ladder plus the permittivity-table
    // nodes (the interpolant has kinks there)
    std::vector<double> bounds = {1e-3, 0.02, 0.1, 0.3, 0.7, 1.5, 3.0, 6.0, 10.0, 16.0, 24.0, 33.0, 45.0};
    for (double& b : bounds) b *= scale;
    for (double w : particle_.mat->omega)
        if (w > bounds.front() && w < omega_hi) bounds.push_back(w);
    std::sort(bounds.begin(), bounds.end());

    const auto& gl = mathkit::gauss_legendre(16);
    double lo = 0.0;
    for (double hi : bounds) {
        if (!(hi > lo)) continue;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            double omega = mid + half * gl.nodes[i];
            auto cs = mie::cross_sections(
                mie::solve_mie(particle_.radius, omega / c_light, relative_index(particle_, omega)));
            t.omega.push_back(omega);
            t.weight.push_back(half * gl.weights[i]);
            t.sigma_sca.push_back(cs.sca);
            t.sigma_abs.push_back(cs.abs);
        }
        lo = hi;
    }
    return t;
}

EnvKernel::EnvKernel(ParticleSpec particle, EnvironmentSpec env, double grating_period,
                     bool literal_sm_time_factor)
    : particle_(std::move(particle)),
      env_(std::move(env)),
      period_(grating_period),
      literal_sm_time_factor_(literal_sm_time_factor) {
    particle_.validate();
    env_.validate();
    if (!(period_ > 0.0)) throw DomainError("EnvKernel: grating period must be > 0");
    gamma_coll_ = decoherence::collision_rate(particle_, env_);
    env_table_ = build_table(env_.temperature);
    int_table_ = build_table(particle_.internal_temperature);
}

double harmonic_separation(int n, const ProtocolSpec& protocol, double mass, double period) {
    protocol.validate();
    return constants::h_planck * std::abs(n) * protocol.t1 * protocol.t2 /
           (mass * period * (protocol.t1 + protocol.t2));
}

double EnvKernel::survival_probability(const ProtocolSpec& protocol) const {
    protocol.validate();
    return std::exp(-gamma_coll_ * (protocol.t1 + protocol.t2));
}

double EnvKernel::operator()(int n, const ProtocolSpec& protocol) const {
    if (n == 0) return 1.0;
    return at_separation(harmonic_separation(n, protocol, particle_.mass(), period_), protocol);
}

double EnvKernel::at_separation(double s, const ProtocolSpec& protocol) const {
    protocol.validate();
    if (s == 0.0) return 1.0;
    double t_sum = protocol.t1 + protocol.t2;
    double t_sca = literal_sm_time_factor_ ? (protocol.t1 - protocol.t2) : t_sum;

    double log_r = 0.0;
    double mode_pref = 1.0 / (pi * c_light) / (pi * c_light);

    // scattering + absorption of thermal photons at T_env
    for (size_t i = 0; i < env_table_.omega.size(); ++i) {
        double omega = env_table_.omega[i];
        double occ = planck_occupation(omega, env_.temperature);
        if (occ == 0.0) continue;
        double mode = mode_pref * omega * omega * occ;
        double a = omega * s / c_light;
        double g_abs = mode * env_table_.sigma_abs[i];
        double g_sca = mode * env_table_.sigma_sca[i];
        log_r += env_table_.weight[i] *
                 (g_abs * bracket_absorption(a) * t_sum + g_sca * bracket_scattering(a) * t_sca);
    }

    // emission at the internal temperature along both legs
    if (particle_.temp_model == ParticleSpec::TempModel::kConstant) {
        double tint = particle_.internal_temperature;
        for (size_t i = 0; i < int_table_.omega.size(); ++i) {
            double omega = int_table_.omega[i];
            double y = hbar * omega / (k_boltzmann * tint);
            if (y > 700.0) continue;
            double g_emi = mode_pref * omega * omega * int_table_.sigma_abs[i] * std::exp(-y);
            double a = omega * s / c_light;
            log_r += int_table_.weight[i] * g_emi * bracket_absorption(a) * t_sum;
        }
    } else {
        // theta parametrizes the linear separation ramp; the internal
        // temperature is evaluated at the matching absolute time
        const auto& gl = mathkit::gauss_legendre(32);
        for (size_t j = 0; j < gl.nodes.size(); ++j) {
            double theta = 0.5 * (gl.nodes[j] + 1.0);
            double wtheta = 0.5 * gl.weights[j];
            double temp1 = internal_temperature(particle_, protocol.t1 * (1.0 - theta));
            double temp2 = internal_temperature(particle_, protocol.t1 + protocol.t2 * theta);
            for (size_t i = 0; i < int_table_.omega.size(); ++i) {
                double omega = int_table_.omega[i];
                double mode = mode_pref * omega * omega * int_table_.sigma_abs[i];
                double a = omega * s / c_light;
                double y1 = hbar * omega / (k_boltzmann * temp1);
                double y2 = hbar * omega / (k_boltzmann * temp2);
                double rate = protocol.t1 * (y1 > 700.0 ? 0.0 : std::exp(-y1)) +
                              protocol.t2 * (y2 > 700.0 ? 0.0 : std::exp(-y2));
                log_r += int_table_.weight[i] * wtheta * mode * rate * (sinc(a * theta) - 1.0);
            }
        }
    }

    return std::exp(log_r);
}

double EnvKernel::lambda_blackbody() const {
    // instantaneous quadratic coefficients:
    //   scattering (1 - sinc^2): omega^2/(3 c^2); absorption/emission
    //   (1 - sinc): omega^2/(6 c^2)
    double mode_pref = 1.0 / (pi * c_light) / (pi * c_light);
    double lam = 0.0;
    for (size_t i = 0; i < env_table_.omega.size(); ++i) {
        double omega = env_table_.omega[i];
        double occ = planck_occupation(omega, env_.temperature);
        if (occ == 0.0) continue;
        double mode = mode_pref * omega * omega * occ;
        double w2c2 = omega * omega / (c_light * c_light);
        lam += env_table_.weight[i] * w2c2 *
               (mode * env_table_.sigma_sca[i] / 3.0 + mode * env_table_.sigma_abs[i] / 6.0);
    }
    double tint = internal_temperature(particle_, 0.0);
    for (size_t i = 0; i < int_table_.omega.size(); ++i) {
        double omega = int_table_.omega[i];
        double y = hbar * omega / (k_boltzmann * tint);
        if (y > 700.0) continue;
        double g_emi = mode_pref * omega * omega * int_table_.sigma_abs[i] * std::exp(-y);
        lam += int_table_.weight[i] * g_emi * omega * omega / (c_light * c_light) / 6.0;
    }
    return lam;
}

double EnvKernel::lambda_gas() const {
    double kg = env_.gas.mass * env_.gas_mean_velocity() / hbar;
    return gamma_coll_ * kg * kg;
}

// ---------------------------------------------------------------------------
// Internal temperature trajectory
// ---------------------------------------------------------------------------

namespace {

struct Trajectory {
    std::vector<double> t;
    std::vector<double> temp;
};

// Radiated power at internal temperature T, from a per-particle spectral table.
double radiated_power(const std::vector<double>& omega, const std::vector<double>& weight,
                      const std::vector<double>& sigma_abs, double T) {
    double p = 0.0;
    double mode_pref = 1.0 / (pi * c_light) / (pi * c_light);
    for (size_t i = 0; i < omega.size(); ++i) {
        double y = hbar * omega[i] / (k_boltzmann * T);
        if (y > 700.0) continue;
        p += weight[i] * hbar * omega[i] * mode_pref * omega[i] * omega[i] * sigma_abs[i] *
             std::exp(-y);
    }
    return p;
}

Trajectory integrate_cooling(const ParticleSpec& p) {
    // emission spectral table spanning the initial thermal band
    double scale = k_boltzmann * p.internal_temperature / hbar;
    std::vector<double> omega, weight, sabs;
    std::vector<double> bounds = {1e-3, 0.02, 0.1, 0.3, 0.7, 1.5, 3.0, 6.0, 10.0, 16.0, 24.0, 33.0, 45.0};
    for (double& b : bounds) b *= scale;
    for (double w : p.mat->omega)
        if (w > bounds.front() && w < bounds.back()) bounds.push_back(w);
    std::sort(bounds.begin(), bounds.end());
    const auto& gl = mathkit::gauss_legendre(16);
    double lo = 0.0;
    for (double hi : bounds) {
        if (!(hi > lo)) continue;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            double w = mid + half * gl.nodes[i];
            std::complex<double> m = std::sqrt(material::permittivity(*p.mat, w));
            if (m.imag() < 0.0) m = -m;
            auto cs = mie::cross_sections(mie::solve_mie(p.radius, w / c_light, m));
            omega.push_back(w);
            weight.push_back(half * gl.weights[i]);
            sabs.push_back(cs.abs);
        }
        lo = hi;
    }

    double inv_mc = 1.0 / (p.mass() * p.mat->specific_heat);
    auto deriv = [&](double T) { return -inv_mc * radiated_power(omega, weight, sabs, T); };

    // adaptive RK4 with step doubling; dense output on a uniform grid
    Trajectory traj;
    const double t_end = 512.0;
    const double dt_out = 0.25;
    double t = 0.0, T = p.internal_temperature;
    double h = 0.05;
    traj.t.push_back(0.0);
    traj.temp.push_back(T);
    double next_out = dt_out;
    auto rk4 = [&](double Tin, double step) {
        double k1 = deriv(Tin);
        double k2 = deriv(Tin + 0.5 * step * k1);
        double k3 = deriv(Tin + 0.5 * step * k2);
        double k4 = deriv(Tin + step * k3);
        return Tin + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    int guard = 0;
    while (t < t_end) {
        if (++guard > 2000000)
            throw ConvergenceError("internal_temperature: cooling ODE stalled", T, h);
        double big = rk4(T, h);
        double small = rk4(rk4(T, 0.5 * h), 0.5 * h);
        double err = std::abs(big - small);
        double tol = 1e-9 * p.internal_temperature + 1e-9 * std::abs(small);
        if (err > tol && h > 1e-6) {
            h *= 0.5;
            continue;
        }
        double t_old = t;
        double T_old = T;
        t += h;
        T = small + (small - big) / 15.0; // local extrapolation
        if (!(T > 0.0)) T = 1e-3;
        if (err < 0.01 * tol && h < 4.0) h *= 2.0;
        while (next_out <= t + 1e-12 && next_out <= t_end) {
            double u = (next_out - t_old) / (t - t_old);
            traj.t.push_back(next_out);
            traj.temp.push_back(T_old + u * (T - T_old));
            next_out += dt_out;
        }
    }
    return traj;
}

const Trajectory& cached_trajectory(const ParticleSpec& p) {
    using Key = std::tuple<const material::Material*, double, double>;
    static std::mutex mtx;
    static std::map<Key, Trajectory> cache;
    Key key{p.mat.get(), p.radius, p.internal_temperature};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, integrate_cooling(p)).first;
    return it->second;
}

} // namespace

double internal_temperature(const ParticleSpec& p, double t) {
    p.validate();
    if (t < 0.0) throw DomainError("internal_temperature: t must be >= 0");
    if (p.temp_model == ParticleSpec::TempModel::kConstant) return p.internal_temperature;
    const Trajectory& traj = cached_trajectory(p);
    if (t >= traj.t.back()) return traj.temp.back();
    auto it = std::upper_bound(traj.t.begin(), traj.t.end(), t);
    size_t hi = static_cast<size_t>(it - traj.t.begin());
    if (hi == 0) return traj.temp.front();
    size_t lo = hi - 1;
    double u = (t - traj.t[lo]) / (traj.t[hi] - traj.t[lo]);
    return traj.temp[lo] + u * (traj.temp[hi] - traj.temp[lo]);
}

} // namespace qppf::decoherence
