#include "qppf/collapse.hpp"

#include <cmath>

#include "qppf/mathkit.hpp"

namespace qppf::collapse {

using constants::G_newton;
using constants::hbar;
using constants::m0_csl;
using constants::pi;

double sphere_form_factor(const ParticleSpec& p, double q) {
    p.validate();
    if (q < 0.0) throw DomainError("sphere_form_factor: q must be >= 0");
    double mass = p.mass();
    if (q == 0.0) return mass;
    double y = q * p.radius / hbar;
    double rho0 = p.mat->density;
    return rho0 * 4.0 * pi * hbar * p.radius * p.radius * mathkit::spherical_j(1, y) / q;
}

namespace {

// Integrals over the Gaussian-damped sphere response,
//   I[g] = Int_0^inf j1(eta y)^2 e^{-y^2} g(y) dy  (y = q r_c / hbar),
// with panels matched to the j1 oscillation period.
double sphere_response_integral(double eta, const std::function<double(double)>& weight) {
    const double y_max = 7.5;
    double panel = std::min(0.25, pi / std::max(eta, 1.0));
    int panels = static_cast<int>(std::ceil(y_max / panel));
    const auto& gl = mathkit::gauss_legendre(8);
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = y_max * p / panels;
        double hi = y_max * (p + 1) / panels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            double y = mid + half * gl.nodes[i];
            double j1 = mathkit::spherical_j(1, eta * y);
            sum += half * gl.weights[i] * j1 * j1 * std::exp(-y * y) * weight(y);
        }
    }
    return sum;
}

// Gamma_CSL normalization: (8/sqrt(pi)) lambda r_c^3/(hbar^3 m0^2)
// Int q^2 mu(q)^2 exp(-r_c^2 q^2/hbar^2) dq, reduced to the response
// integral above. The constant is fixed so that the small-separation
// expansion of the kernel exponent reproduces the quadratic diffusion
// coefficient exactly.
double gamma_unit_for(const ParticleSpec& p, double rc) {
    double eta = p.radius / rc;
    double rho0 = p.mat->density;
    double pref = 128.0 * pi * pi / std::sqrt(pi) * rc * rc *
                  std::pow(p.radius, 4) * rho0 * rho0 / (m0_csl * m0_csl);
    return pref * sphere_response_integral(eta, [](double) { return 1.0; });
}

} // namespace

CslRate csl_gamma_and_f(const ParticleSpec& p, const CslParams& c) {
    p.validate();
    c.validate();
    double eta = p.radius / c.rc;
    double norm = sphere_response_integral(eta, [](double) { return 1.0; });
    double gamma = c.lambda * gamma_unit_for(p, c.rc);
    double rc = c.rc;
    CslRate out;
    out.gamma = gamma;
    out.f = [eta, norm, rc](double x) {
        if (x < 0.0) throw DomainError("f_CSL: separation must be >= 0");
        if (x == 0.0) return 1.0;
        double v = sphere_response_integral(
            eta, [&](double y) { return mathkit::sine_integral_over_x(y * x / rc); });
        return v / norm;
    };
    return out;
}

double csl_kernel(int n, const ProtocolSpec& protocol, const ParticleSpec& p,
                  const CslParams& c, double period) {
    protocol.validate();
    if (n == 0 || c.lambda == 0.0) return 1.0;
    CslRate rate = csl_gamma_and_f(p, c);
    double s = constants::h_planck * std::abs(n) * protocol.t1 * protocol.t2 /
               (p.mass() * period * (protocol.t1 + protocol.t2));
    return std::exp(rate.gamma * (rate.f(s) - 1.0) * (protocol.t1 + protocol.t2));
}

double csl_diffusion(const ParticleSpec& p, const CslParams& c) {
    p.validate();
    c.validate();
    double eta = p.radius / c.rc;
    double eta2 = eta * eta;
    double bracket;
    if (eta < 0.15) {
        // (1 + eta^2/2) e^{-eta^2} + eta^2/2 - 1 = eta^6/12 - eta^8/24 + eta^10/80 - ...
        double eta6 = eta2 * eta2 * eta2;
        bracket = eta6 / 12.0 - eta6 * eta2 / 24.0 + eta6 * eta2 * eta2 / 80.0;
    } else {
        bracket = (1.0 + 0.5 * eta2) * std::exp(-eta2) + 0.5 * eta2 - 1.0;
    }
    double mass = p.mass();
    return 6.0 * c.lambda * mass * mass /
           (m0_csl * m0_csl * p.radius * p.radius * eta2 * eta2) * bracket;
}

double dp_diffusion(const ParticleSpec& p, const DpParams& dp) {
    p.validate();
    dp.validate(false);
    double eta = p.radius / dp.r0;
    if (!(eta > 0.0)) throw DomainError("dp_diffusion: eta must be > 0");
    double bracket;
    if (eta < 0.05) {
        // sqrt(pi) erf(eta) - 3/eta + 2/eta^3 + e^{-eta^2}(1 - 2/eta^2)/eta
        //   = eta^3/6 - eta^5/20 + 3 eta^7/280 - ...
        double e2 = eta * eta;
        bracket = eta * eta * eta * (1.0 / 6.0 - e2 / 20.0 + 3.0 * e2 * e2 / 280.0);
    } else {
        bracket = std::sqrt(pi) * std::erf(eta) - 3.0 / eta + 2.0 / (eta * eta * eta) +
                  std::exp(-eta * eta) / eta * (1.0 - 2.0 / (eta * eta));
    }
    double mass = p.mass();
    return mass * mass * G_newton / (2.0 * hbar * std::sqrt(pi) * std::pow(p.radius, 3)) * bracket;
}

// ---------------------------------------------------------------------------
// CslKernel
// ---------------------------------------------------------------------------

CslKernel::CslKernel(ParticleSpec p, double rc, double period)
    : particle_(std::move(p)), rc_(rc), period_(period) {
    particle_.validate();
    if (!(rc_ > 0.0) || !(period_ > 0.0)) throw DomainError("CslKernel: bad parameters");
    gamma_unit_ = gamma_unit_for(particle_, rc_);
}

double CslKernel::f_at(double s) const {
    if (s == 0.0) return 1.0;
    {
        std::lock_guard<std::mutex> lock(mtx_);
        auto it = f_cache_.find(s);
        if (it != f_cache_.end()) return it->second;
    }
    double eta = particle_.radius / rc_;
    double norm = sphere_response_integral(eta, [](double) { return 1.0; });
    double v = sphere_response_integral(
                   eta, [&](double y) { return mathkit::sine_integral_over_x(y * s / rc_); }) /
               norm;
    std::lock_guard<std::mutex> lock(mtx_);
    f_cache_.emplace(s, v);
    return v;
}

double CslKernel::kernel(int n, double lambda, const ProtocolSpec& protocol) const {
    if (n == 0 || lambda == 0.0) return 1.0;
    double s = constants::h_planck * std::abs(n) * protocol.t1 * protocol.t2 /
               (particle_.mass() * period_ * (protocol.t1 + protocol.t2));
    return std::exp(gamma(lambda) * (f_at(s) - 1.0) * (protocol.t1 + protocol.t2));
}

} // namespace qppf::collapse
