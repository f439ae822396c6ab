#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qppf/collapse.hpp"
#include "qppf/decoherence.hpp"
#include "qppf/specs.hpp"

// Non-interferometric test pipeline: decoherence function, free-fall variance
// growth, statistical limits, the acceleration-noise requirement, and
// (r_c, lambda) bound solving.
namespace qppf::noninterf {

struct DiffusionBudget {
    double gas = 0.0;        // 1/(m^2 s)
    double blackbody = 0.0;
    double csl = 0.0;
    double dp = 0.0;
    double total = 0.0;
};

// Variance added by a position-diffusion rate Lambda over free fall t:
// 2 Lambda hbar^2 t^3 / (3 m^2).
double variance_growth(double lambda, double mass, double t);

// Statistical floor on the measured spread: Dx_f^2 = sqrt(2 t / T_total) x_s^2
// with x_s^2 = t^2 omega hbar / (2 m); omega is the angular trap frequency.
double statistical_limit(double omega, double t, double t_total, double mass);

// Maximum tolerable acceleration-noise amplitude sqrt(3 d^2/(8 pi T^3)).
double accel_noise_requirement(double d, double t);

enum class BoundMode { kEnvironmentLimited, kStatisticsLimited };

struct StatLimitSetup {
    double t = 100.0;          // s, free fall per shot
    double t_total = 2592000.0; // s, 30 days of data taking
    double omega = 1e5;        // rad/s, trap frequency
    double epsilon = 1e-12;    // m, single-shot position resolution
};

// Per-(particle, environment) calculator; builds the blackbody spectral
// tables once.
class Calculator {
public:
    Calculator(ParticleSpec particle, EnvironmentSpec env);

    // Gamma(x): gas contribution saturating at the collision rate beyond the
    // gas correlation length, plus the quadratic blackbody term.
    double decoherence_function(double x) const;

    double lambda_gas() const { return kernel_.lambda_gas(); }
    double lambda_blackbody() const { return kernel_.lambda_blackbody(); }
    double collision_rate() const { return kernel_.collision_rate(); }

    DiffusionBudget budget(const std::optional<CslParams>& csl = std::nullopt,
                           const std::optional<DpParams>& dp = std::nullopt) const;

    // Smallest excluded lambda at localization length r_c.
    double csl_bound(double rc, BoundMode mode, const StatLimitSetup& stat = {}) const;

    const ParticleSpec& particle() const { return particle_; }

private:
    ParticleSpec particle_;
    EnvironmentSpec env_;
    decoherence::EnvKernel kernel_;
};

struct BoundCurve {
    std::vector<double> rc;         // m
    std::vector<double> lambda_min; // 1/s
    std::string mode;
};

BoundCurve bound_curve(const Calculator& calc, const std::vector<double>& rc_grid,
                       BoundMode mode, const StatLimitSetup& stat = {});

} // namespace qppf::noninterf
