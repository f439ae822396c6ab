#pragma once

#include <functional>
#include <map>
#include <mutex>

#include "qppf/specs.hpp"

// Collapse-model physics: CSL pattern kernel, CSL and DP diffusion
// constants, and the homogeneous-sphere form factor.
namespace qppf::collapse {

// Mass-dimension form factor of the homogeneous sphere,
// mu(q) = rho0 * 4 pi hbar R^2 j1(q R / hbar) / q, with mu(0) = M.
double sphere_form_factor(const ParticleSpec& p, double q);

// Saturated CSL rate and the separation profile f(x) (time-averaged over the
// linear separation ramp of a free-fall leg): f(0) = 1, f -> 0 at large x,
// monotone non-increasing. The pattern kernel is
//   R_n = exp(Gamma (f(s_n) - 1) (t1 + t2)).
struct CslRate {
    double gamma = 0.0;                    // 1/s
    std::function<double(double)> f;       // dimensionless profile of x (m)
};
CslRate csl_gamma_and_f(const ParticleSpec& p, const CslParams& c);

// One-shot kernel for pattern harmonic n (grating period d).
double csl_kernel(int n, const ProtocolSpec& protocol, const ParticleSpec& p,
                  const CslParams& c, double period);

// Quadratic-regime diffusion constants, 1/(m^2 s).
double csl_diffusion(const ParticleSpec& p, const CslParams& c);
double dp_diffusion(const ParticleSpec& p, const DpParams& dp);

// Cached evaluator used by the pattern/scan pipelines: the rate is linear in
// lambda and the profile f depends only on (particle, r_c), so exclusion
// scans reuse one instance across the whole lambda bisection.
class CslKernel {
public:
    CslKernel(ParticleSpec p, double rc, double period);

    double gamma(double lambda) const { return lambda * gamma_unit_; }
    double f_at(double separation) const; // memoized
    double kernel(int n, double lambda, const ProtocolSpec& protocol) const;

private:
    ParticleSpec particle_;
    double rc_;
    double period_;
    double gamma_unit_; // Gamma at lambda = 1
    mutable std::mutex mtx_;
    mutable std::map<double, double> f_cache_;
};

} // namespace qppf::collapse
