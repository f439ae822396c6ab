#pragma once

#include <memory>
#include <vector>

#include "qppf/mathkit.hpp"
#include "qppf/specs.hpp"

// Free-fall environmental decoherence: residual-gas collisions, blackbody
// scattering/absorption/emission, the internal-temperature trajectory, and
// the per-harmonic kernel R_n entering the interference pattern.
namespace qppf::decoherence {

// Saturated decoherence rate from residual-gas collisions (van der Waals
// cross section). Linear in pressure.
double collision_rate(const ParticleSpec& p, const EnvironmentSpec& env);

// Spectral rates (per unit omega) at frequency omega. gamma_sca and
// gamma_abs carry the Planck occupation at the given temperature (the
// environment temperature in the kernels); gamma_emi carries the Boltzmann
// factor at the given temperature (the internal temperature).
struct BbRates {
    double sca = 0.0;
    double abs = 0.0;
    double emi = 0.0;
};
BbRates bb_rates(const ParticleSpec& p, double omega, double temperature);

// Internal temperature at time t after release. The constant model returns
// T_int0; the radiative model integrates the emission cooling ODE.
double internal_temperature(const ParticleSpec& p, double t);

// Precomputed spectral machinery for one (particle, environment) pair.
// Mie cross sections are tabulated once on mapped Gauss-Legendre frequency
// grids; kernel evaluations then cost a handful of dot products.
class EnvKernel {
public:
    EnvKernel(ParticleSpec particle, EnvironmentSpec env, double grating_period,
              bool literal_sm_time_factor = false);

    // Kernel for harmonic n of the pattern, normalized so that R_0 = 1 (the
    // n-independent collisional attenuation is reported separately).
    double operator()(int n, const ProtocolSpec& protocol) const;

    // Kernel at an explicit grating-shift separation s_n (m).
    double at_separation(double s, const ProtocolSpec& protocol) const;

    // exp(-Gamma_coll (t1+t2)): the absolute survival factor divided out of
    // the normalized kernel.
    double survival_probability(const ProtocolSpec& protocol) const;

    double collision_rate() const { return gamma_coll_; }

    // Quadratic (small-separation) diffusion coefficients, 1/(m^2 s).
    double lambda_blackbody() const;
    double lambda_gas() const;

    const ParticleSpec& particle() const { return particle_; }
    const EnvironmentSpec& environment() const { return env_; }

private:
    struct SpectralTable {
        std::vector<double> omega;
        std::vector<double> weight;   // quadrature weight including Jacobian
        std::vector<double> sigma_sca;
        std::vector<double> sigma_abs;
    };
    SpectralTable build_table(double temperature_scale) const;

    ParticleSpec particle_;
    EnvironmentSpec env_;
    double period_;
    bool literal_sm_time_factor_;
    double gamma_coll_ = 0.0;
    SpectralTable env_table_; // scale k_B T_env / hbar (scattering, absorption)
    SpectralTable int_table_; // scale k_B T_int / hbar (emission)
};

// Separation length of pattern harmonic n: s_n = h n t1 t2 / (m d (t1+t2)).
double harmonic_separation(int n, const ProtocolSpec& protocol, double mass, double period);

} // namespace qppf::decoherence
