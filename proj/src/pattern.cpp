#include "qppf/pattern.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace qppf::pattern {

using constants::h_planck;
using constants::hbar;
using constants::k_boltzmann;
using constants::pi;

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::kQuantum: return "quantum";
        case Kind::kClassical: return "classical";
        default: return "csl";
    }
}

Spreads initial_spreads(double nu_m, double t0, double mass) {
    if (!(nu_m > 0.0) || !(t0 > 0.0) || !(mass > 0.0))
        throw DomainError("initial_spreads: inputs must be > 0");
    double gamma = pi * mass * nu_m;
    double beta0 = h_planck / (2.0 * k_boltzmann * t0);
    double arg = beta0 * nu_m;
    double coth = arg > 350.0 ? 1.0 : 1.0 / std::tanh(arg);
    Spreads s;
    s.sigma_z = std::sqrt(hbar / (4.0 * gamma) * coth);
    s.sigma_p = std::sqrt(hbar * gamma * coth);
    return s;
}

double talbot_time(double mass, double period) {
    if (!(mass > 0.0) || !(period > 0.0)) throw DomainError("talbot_time: inputs must be > 0");
    return mass * period * period / h_planck;
}

PatternBuilder::PatternBuilder(ParticleSpec particle, GratingSpec grating, EnvironmentSpec env)
    : particle_(std::move(particle)),
      grating_(std::move(grating)),
      env_(std::move(env)),
      calc_(std::make_shared<grating::GratingCalculator>(particle_, grating_)),
      env_kernel_(particle_, env_, grating_.period()) {}

std::vector<double> PatternBuilder::harmonic_coefficients(
    Kind kind, const ProtocolSpec& protocol, const std::optional<CslParams>& csl,
    std::optional<double> fluence_opt) const {
    protocol.validate();
    if (kind == Kind::kCsl && !csl)
        throw InterfaceError("pattern: CSL kind requires collapse parameters");

    double fluence = fluence_opt.value_or(grating_.fluence);
    double d = grating_.period();
    double mass = particle_.mass();
    auto calc = calc_;
    grating::TalbotEvaluator talbot(
        [calc, fluence](double s) {
            grating::GratingFunctions f = calc->functions_unit(s);
            f.a *= fluence;
            f.b *= fluence;
            f.F *= fluence;
            f.c_abs *= fluence;
            f.zeta_coh *= fluence;
            return f;
        },
        calc->coherent_phase_unit() * fluence, d);

    std::shared_ptr<collapse::CslKernel> csl_kernel;
    if (kind == Kind::kCsl && csl->lambda > 0.0) {
        csl->validate();
        std::lock_guard<std::mutex> lock(csl_mtx_);
        auto it = csl_cache_.find(csl->rc);
        if (it == csl_cache_.end())
            it = csl_cache_.emplace(csl->rc,
                                    std::make_shared<collapse::CslKernel>(particle_, csl->rc, d))
                     .first;
        csl_kernel = it->second;
    }

    Spreads spreads = initial_spreads(protocol.trap_frequency, protocol.com_temperature, mass);
    double t_t = talbot_time(mass, d);
    double mag = d * (protocol.t1 + protocol.t2) / protocol.t1;
    double damp_scale = pi * spreads.sigma_z * protocol.t2 / (mag * protocol.t1);

    std::vector<double> coeffs;
    const double tail_tol = 1e-8;
    const int n_cap = 10000;
    double phi0 = std::abs(calc->coherent_phase_unit() * fluence);
    // mask coefficients of order n need an argument of comparable size, so
    // they cannot revive beyond the coherent-phase scale; never truncate
    // before it
    int n_floor = static_cast<int>(std::ceil(phi0 + 10.0 * (1.0 + std::cbrt(phi0))));
    int below = 0;
    for (int n = 1; n <= n_cap; ++n) {
        double s_n = decoherence::harmonic_separation(n, protocol, mass, d);
        double damp = std::exp(-2.0 * damp_scale * damp_scale * n * n);
        double envelope = (kind == Kind::kClassical) ? talbot.classical_envelope(s_n)
                                                     : talbot.quantum_envelope(s_n);
        double c_n = 0.0;
        if (envelope * damp >= 0.1 * tail_tol) {
            double b_n = (kind == Kind::kClassical) ? talbot.classical(n, s_n)
                                                    : talbot.quantum(n, s_n);
            if (std::abs(b_n) * damp >= 0.1 * tail_tol) {
                // decoherence kernels only attenuate; skip them when the
                // coefficient is already below the tail tolerance
                double r_n = env_kernel_.at_separation(s_n, protocol);
                if (csl_kernel) r_n *= csl_kernel->kernel(n, csl->lambda, protocol);
                c_n = b_n * r_n * damp;
            }
        }
        coeffs.push_back(c_n);
        below = std::abs(c_n) < tail_tol ? below + 1 : 0;
        if (below >= 3 && n >= n_floor) break;
    }
    if (below < 3)
        throw ConvergenceError("pattern: harmonic series did not reach its tail criterion",
                               0.0, std::abs(coeffs.back()));
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < tail_tol) coeffs.pop_back();
    return coeffs;
}

Pattern PatternBuilder::compute(Kind kind, const ProtocolSpec& protocol,
                                const std::optional<CslParams>& csl, double window_lo,
                                double window_hi, int samples,
                                std::optional<double> fluence_opt) const {
    if (samples < 64) throw DomainError("pattern: need at least 64 samples");
    double mass = particle_.mass();
    double d = grating_.period();
    double mag = d * (protocol.t1 + protocol.t2) / protocol.t1;
    if (window_lo == window_hi) {
        window_lo = -0.5 * mag;
        window_hi = 0.5 * mag;
    }
    if (!(window_hi > window_lo)) throw DomainError("pattern: bad z window");

    std::vector<double> coeffs = harmonic_coefficients(kind, protocol, csl, fluence_opt);

    Spreads spreads = initial_spreads(protocol.trap_frequency, protocol.com_temperature, mass);
    Pattern p;
    p.kind = kind;
    p.magnification = mag;
    p.talbot_time = talbot_time(mass, d);
    p.delta = mass / (std::sqrt(2.0 * pi) * spreads.sigma_p * (protocol.t1 + protocol.t2));
    p.survival = env_kernel_.survival_probability(protocol);
    p.truncation = static_cast<int>(coeffs.size());

    double fluence = fluence_opt.value_or(grating_.fluence);
    std::ostringstream digest;
    digest << kind_name(kind) << " R=" << particle_.radius << " m=" << mass
           << " lambda_g=" << grating_.wavelength << " fluence=" << fluence
           << " p=" << env_.pressure << " Tenv=" << env_.temperature << " t1=" << protocol.t1
           << " t2=" << protocol.t2;
    if (csl && kind == Kind::kCsl)
        digest << " csl_lambda=" << csl->lambda << " rc=" << csl->rc;
    p.digest = digest.str();

    p.z.resize(static_cast<size_t>(samples));
    p.values.resize(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        double z = window_lo + (window_hi - window_lo) * i / (samples - 1);
        double acc = 1.0;
        for (size_t n = 0; n < coeffs.size(); ++n)
            acc += 2.0 * coeffs[n] * std::cos(2.0 * pi * (n + 1) * z / mag);
        p.z[static_cast<size_t>(i)] = z;
        p.values[static_cast<size_t>(i)] = p.delta * acc;
    }
    return p;
}

Pattern compute_pattern(const PatternRequest& r) {
    PatternBuilder builder(r.particle, r.grating, r.environment);
    return builder.compute(r.kind, r.protocol, r.csl, r.window_lo, r.window_hi, r.samples);
}

void Pattern::write_csv(std::ostream& os) const {
    os << "# kind = " << kind_name(kind) << "\n";
    os << "# digest = " << digest << "\n";
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << "# " << key << " = " << buf << "\n";
    };
    put("magnification_m", magnification);
    put("talbot_time_s", talbot_time);
    put("delta_per_m", delta);
    put("survival", survival);
    os << "# truncation = " << truncation << "\n";
    os << "z_m,p_per_m\n";
    for (size_t i = 0; i < z.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", z[i]);
        os << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        os << buf << "\n";
    }
}

} // namespace qppf::pattern
