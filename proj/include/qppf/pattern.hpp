#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qppf/collapse.hpp"
#include "qppf/decoherence.hpp"
#include "qppf/grating.hpp"
#include "qppf/specs.hpp"

// Near-field interference / shadow pattern P(z) assembled from Talbot
// coefficients and decoherence kernels.
namespace qppf::pattern {

enum class Kind { kQuantum, kClassical, kCsl };
const char* kind_name(Kind k);

struct Spreads {
    double sigma_z = 0.0; // m
    double sigma_p = 0.0; // kg m/s
};

// Post-cooling thermal-state spreads for trap frequency nu_m (Hz) and
// c.o.m. temperature T0.
Spreads initial_spreads(double nu_m, double t0, double mass);

// Talbot time m d^2 / h.
double talbot_time(double mass, double period);

struct Pattern {
    Kind kind = Kind::kQuantum;
    std::vector<double> z;      // m
    std::vector<double> values; // probability density, 1/m
    double magnification = 0.0; // D, m
    double talbot_time = 0.0;   // s
    double delta = 0.0;         // mean density, 1/m
    double survival = 1.0;      // exp(-Gamma_coll (t1+t2)) diagnostic
    int truncation = 0;         // harmonics kept
    std::string digest;         // one-line spec summary

    void write_csv(std::ostream& os) const;
};

// Heavy per-(particle, grating, environment) state shared across protocol and
// fluence variations; pattern evaluation per cell is then cheap.
class PatternBuilder {
public:
    PatternBuilder(ParticleSpec particle, GratingSpec grating, EnvironmentSpec env);

    // kind = kCsl requires csl parameters. The fluence override (J/m^2)
    // replaces the grating-spec value when given (scan cells).
    Pattern compute(Kind kind, const ProtocolSpec& protocol,
                    const std::optional<CslParams>& csl = std::nullopt,
                    double window_lo = 0.0, double window_hi = 0.0, int samples = 1024,
                    std::optional<double> fluence = std::nullopt) const;

    // Harmonic amplitudes c_n (n = 1..N) of P/delta = 1 + 2 sum c_n cos(.).
    std::vector<double> harmonic_coefficients(Kind kind, const ProtocolSpec& protocol,
                                              const std::optional<CslParams>& csl,
                                              std::optional<double> fluence = std::nullopt) const;

    const ParticleSpec& particle() const { return particle_; }
    const GratingSpec& grating() const { return grating_; }
    const decoherence::EnvKernel& env_kernel() const { return env_kernel_; }
    const grating::GratingCalculator& calculator() const { return *calc_; }

private:
    ParticleSpec particle_;
    GratingSpec grating_;
    EnvironmentSpec env_;
    std::shared_ptr<const grating::GratingCalculator> calc_;
    decoherence::EnvKernel env_kernel_;
    mutable std::mutex csl_mtx_;
    mutable std::map<double, std::shared_ptr<collapse::CslKernel>> csl_cache_; // by r_c
};

struct PatternRequest {
    Kind kind = Kind::kQuantum;
    ProtocolSpec protocol;
    ParticleSpec particle;
    GratingSpec grating;
    EnvironmentSpec environment;
    std::optional<CslParams> csl;
    double window_lo = 0.0; // defaults to one magnified period when lo == hi
    double window_hi = 0.0;
    int samples = 1024;
};

Pattern compute_pattern(const PatternRequest& request);

} // namespace qppf::pattern
