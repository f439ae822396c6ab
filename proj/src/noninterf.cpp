#include "qppf/noninterf.hpp"

#include <cmath>

namespace qppf::noninterf {

using constants::hbar;
using constants::pi;

double variance_growth(double lambda, double mass, double t) {
    if (t < 0.0 || !(mass > 0.0)) throw DomainError("variance_growth: bad inputs");
    return 2.0 * lambda * hbar * hbar * t * t * t / (3.0 * mass * mass);
}

double statistical_limit(double omega, double t, double t_total, double mass) {
    if (!(t_total > t) || !(t > 0.0) || !(omega > 0.0) || !(mass > 0.0))
        throw DomainError("statistical_limit: requires T_total > t > 0 and positive inputs");
    double xs2 = t * t * omega * hbar / (2.0 * mass);
    return std::sqrt(std::sqrt(2.0 * t / t_total) * xs2);
}

double accel_noise_requirement(double d, double t) {
    if (!(d > 0.0) || !(t > 0.0)) throw DomainError("accel_noise_requirement: bad inputs");
    return std::sqrt(3.0 * d * d / (8.0 * pi * t * t * t));
}

Calculator::Calculator(ParticleSpec particle, EnvironmentSpec env)
    : particle_(std::move(particle)), env_(std::move(env)),
      kernel_(particle_, env_, 50e-9) {}

double Calculator::decoherence_function(double x) const {
    if (x < 0.0) throw DomainError("decoherence_function: x must be >= 0");
    if (x == 0.0) return 0.0;
    double gamma = kernel_.collision_rate();
    double gas;
    if (gamma > 0.0) {
        // saturating interpolation with the exact quadratic and plateau limits
        gas = gamma * -std::expm1(-kernel_.lambda_gas() * x * x / gamma);
    } else {
        gas = 0.0;
    }
    return gas + kernel_.lambda_blackbody() * x * x;
}

DiffusionBudget Calculator::budget(const std::optional<CslParams>& csl,
                                   const std::optional<DpParams>& dp) const {
    DiffusionBudget b;
    b.gas = kernel_.lambda_gas();
    b.blackbody = kernel_.lambda_blackbody();
    if (csl) b.csl = collapse::csl_diffusion(particle_, *csl);
    if (dp) b.dp = collapse::dp_diffusion(particle_, *dp);
    b.total = b.gas + b.blackbody + b.csl + b.dp;
    return b;
}

double Calculator::csl_bound(double rc, BoundMode mode, const StatLimitSetup& stat) const {
    if (!(rc > 0.0)) throw DomainError("csl_bound: r_c must be > 0");
    double lambda_unit = collapse::csl_diffusion(particle_, CslParams{1.0, rc});
    if (mode == BoundMode::kEnvironmentLimited)
        return (kernel_.lambda_gas() + kernel_.lambda_blackbody()) / lambda_unit;
    // statistics-limited: diffusion resolvable once it exceeds the
    // statistical variance floor (resolution added in quadrature)
    double dxf = statistical_limit(stat.omega, stat.t, stat.t_total, particle_.mass());
    double floor_var = dxf * dxf + stat.epsilon * stat.epsilon;
    double mass = particle_.mass();
    double lambda_floor = floor_var * 3.0 * mass * mass / (2.0 * hbar * hbar * stat.t * stat.t * stat.t);
    return lambda_floor / lambda_unit;
}

BoundCurve bound_curve(const Calculator& calc, const std::vector<double>& rc_grid,
                       BoundMode mode, const StatLimitSetup& stat) {
    BoundCurve c;
    c.mode = mode == BoundMode::kEnvironmentLimited ? "environment" : "statistics";
    for (double rc : rc_grid) {
        c.rc.push_back(rc);
        c.lambda_min.push_back(calc.csl_bound(rc, mode, stat));
    }
    return c;
}

} // namespace qppf::noninterf
