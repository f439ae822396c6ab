#include "qppf/mie.hpp"

#include <cmath>

#include "qppf/constants.hpp"
#include "qppf/mathkit.hpp"

namespace qppf::mie {

using constants::c_light;
using constants::hbar;
using constants::pi;

MieSolution::MieSolution(double radius, double k, cplx m_rel,
                         std::vector<cplx> a, std::vector<cplx> b)
    : radius_(radius), k_(k), m_rel_(m_rel), a_(std::move(a)), b_(std::move(b)) {}

void MieSolution::amplitudes(double mu, cplx& s1, cplx& s2) const {
    // pi_n / tau_n angular function recurrences
    double pi_prev = 0.0; // pi_0
    double pi_cur = 1.0;  // pi_1
    s1 = 0.0;
    s2 = 0.0;
    int nmax = n_max();
    for (int n = 1; n <= nmax; ++n) {
        double tau = n * mu * pi_cur - (n + 1) * pi_prev;
        double w = (2.0 * n + 1.0) / (n * (n + 1.0));
        s1 += w * (a_[static_cast<size_t>(n - 1)] * pi_cur + b_[static_cast<size_t>(n - 1)] * tau);
        s2 += w * (a_[static_cast<size_t>(n - 1)] * tau + b_[static_cast<size_t>(n - 1)] * pi_cur);
        double pi_next = ((2.0 * n + 1.0) * mu * pi_cur - (n + 1.0) * pi_prev) / n;
        pi_prev = pi_cur;
        pi_cur = pi_next;
    }
}

MieSolution solve_mie(double radius, double k, cplx m_rel) {
    if (!(radius > 0.0) || !(k > 0.0))
        throw DomainError("solve_mie: radius and wavenumber must be > 0");
    if (m_rel.imag() < -1e-12)
        throw DomainError("solve_mie: passive media require Im(m_rel) >= 0");
    double x = k * radius;
    if (x > 1e4)
        throw CapabilityError("solve_mie: size parameter above 1e4 is not supported");

    int nmax = static_cast<int>(std::ceil(x + 4.05 * std::cbrt(x) + 2.0));

    // Trivial medium: no scattering; keep exact zeros.
    if (std::abs(m_rel - 1.0) < 1e-15) {
        std::vector<cplx> zero(static_cast<size_t>(nmax), cplx(0.0, 0.0));
        return MieSolution(radius, k, m_rel, zero, zero);
    }

    cplx mx = m_rel * x;

    // Logarithmic derivative D_n(mx) by downward recurrence.
    int nstart = nmax + 16 + static_cast<int>(std::ceil(std::abs(mx)));
    std::vector<cplx> D(static_cast<size_t>(nstart) + 1, cplx(0.0, 0.0));
    for (int n = nstart; n >= 1; --n) {
        cplx rn = static_cast<double>(n) / mx;
        D[static_cast<size_t>(n - 1)] = rn - 1.0 / (D[static_cast<size_t>(n)] + rn);
    }

    // Riccati-Bessel psi_n(x), chi_n(x) by upward recurrence.
    // psi_n = x j_n(x), chi_n = -x y_n(x), xi_n = psi_n - i chi_n.
    std::vector<cplx> a(static_cast<size_t>(nmax)), b(static_cast<size_t>(nmax));
    double psi_prev = std::cos(x); // psi_{-1}
    double psi_cur = std::sin(x);  // psi_0
    double chi_prev = -std::sin(x); // chi_{-1}
    double chi_cur = std::cos(x);   // chi_0
    for (int n = 1; n <= nmax; ++n) {
        double psi_next = (2.0 * n - 1.0) / x * psi_cur - psi_prev;
        double chi_next = (2.0 * n - 1.0) / x * chi_cur - chi_prev;
        psi_prev = psi_cur;
        psi_cur = psi_next;
        chi_prev = chi_cur;
        chi_cur = chi_next;
        cplx xi_cur(psi_cur, -chi_cur);
        cplx xi_prev(psi_prev, -chi_prev);
        cplx dn = D[static_cast<size_t>(n)];
        cplx fa = dn / m_rel + static_cast<double>(n) / x;
        cplx fb = dn * m_rel + static_cast<double>(n) / x;
        a[static_cast<size_t>(n - 1)] = (fa * psi_cur - psi_prev) / (fa * xi_cur - xi_prev);
        b[static_cast<size_t>(n - 1)] = (fb * psi_cur - psi_prev) / (fb * xi_cur - xi_prev);
    }
    return MieSolution(radius, k, m_rel, std::move(a), std::move(b));
}

CrossSections cross_sections(const MieSolution& s) {
    double k = s.wavenumber();
    double pref = 2.0 * pi / (k * k);
    double sca = 0.0, ext = 0.0;
    const auto& a = s.a_coeffs();
    const auto& b = s.b_coeffs();
    for (int n = 1; n <= s.n_max(); ++n) {
        double w = 2.0 * n + 1.0;
        sca += w * (std::norm(a[static_cast<size_t>(n - 1)]) + std::norm(b[static_cast<size_t>(n - 1)]));
        ext += w * (a[static_cast<size_t>(n - 1)].real() + b[static_cast<size_t>(n - 1)].real());
    }
    CrossSections cs;
    cs.sca = pref * sca;
    cs.ext = pref * ext;
    cs.abs = cs.ext - cs.sca;
    if (cs.abs < 0.0 && cs.abs > -1e-12 * cs.sca) cs.abs = 0.0; // rounding on lossless spheres
    return cs;
}

std::array<cplx, 3> scattering_amplitude(const MieSolution& s, int incidence_sign,
                                         const std::array<double, 3>& n) {
    double norm2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw InterfaceError("scattering_amplitude: direction must be a unit vector");
    if (incidence_sign != 1 && incidence_sign != -1)
        throw InterfaceError("scattering_amplitude: incidence_sign must be +1 or -1");

    double mu = n[2];
    double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    double cphi = 1.0, sphi = 0.0;
    if (st > 1e-14) {
        cphi = n[0] / st;
        sphi = n[1] / st;
    }

    cplx s1, s2;
    cplx i_over_k(0.0, 1.0 / s.wavenumber());
    std::array<cplx, 3> f;
    if (incidence_sign > 0) {
        s.amplitudes(mu, s1, s2);
        f[0] = i_over_k * (s2 * mu * cphi * cphi + s1 * sphi * sphi);
        f[1] = i_over_k * (cphi * sphi * (s2 * mu - s1));
        f[2] = i_over_k * (-s2 * st * cphi);
    } else {
        // Mirror of the +z solution: amplitudes at -mu with reflected basis.
        s.amplitudes(-mu, s1, s2);
        f[0] = i_over_k * (-s2 * mu * cphi * cphi + s1 * sphi * sphi);
        f[1] = i_over_k * (cphi * sphi * (-s2 * mu - s1));
        f[2] = i_over_k * (s2 * st * cphi);
    }
    return f;
}

namespace {

// phi-integrated overlap of the +z and -z scattered waves,
// A(mu) = Int dphi f_+^* . f_- = (pi/k^2) [S1*(mu) S1(-mu) - S2*(mu) S2(-mu)].
cplx overlap_correlator(const MieSolution& s, double mu) {
    cplx s1p, s2p, s1m, s2m;
    s.amplitudes(mu, s1p, s2p);
    s.amplitudes(-mu, s1m, s2m);
    double k = s.wavenumber();
    return pi / (k * k) * (std::conj(s1p) * s1m - std::conj(s2p) * s2m);
}

} // namespace

double axial_force(const MieSolution& s, double intensity_parameter, double z0) {
    if (!(intensity_parameter > 0.0))
        throw DomainError("axial_force: intensity parameter must be > 0");
    double k = s.wavenumber();

    cplx s1_back, s2_back;
    s.amplitudes(-1.0, s1_back, s2_back);

    // Extinction (interference of the scattered wave with each running wave).
    double ext = 8.0 * pi / (k * k) * std::sin(2.0 * k * z0) * s1_back.imag();

    // Recoil of the coherently scattered wave; only the +/- cross term
    // depends on z0 (the direct terms cancel by parity).
    int ngl = 2 * s.n_max() + 16;
    const auto& gl = mathkit::gauss_legendre(ngl);
    cplx q(0.0, 0.0);
    for (size_t i = 0; i < gl.nodes.size(); ++i)
        q += gl.weights[i] * gl.nodes[i] * std::conj(overlap_correlator(s, gl.nodes[i]));
    cplx phase = std::exp(cplx(0.0, 2.0 * k * z0));
    double recoil = -2.0 * (phase * q).real();

    return intensity_parameter / (4.0 * c_light) * (ext + recoil);
}

double axial_force_amplitude(const MieSolution& s, double intensity_parameter) {
    double lambda = 2.0 * pi / s.wavenumber();
    return axial_force(s, intensity_parameter, -lambda / 8.0);
}

double eikonal_phase(double force_amplitude, double intensity_parameter, double k,
                     double fluence) {
    if (!(intensity_parameter > 0.0) || !(k > 0.0))
        throw DomainError("eikonal_phase: intensity parameter and k must be > 0");
    return 4.0 * force_amplitude * fluence / (hbar * k * intensity_parameter);
}

} // namespace qppf::mie
