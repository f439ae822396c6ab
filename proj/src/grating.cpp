#include "qppf/grating.hpp"

#include <cmath>

#include "qppf/mathkit.hpp"

namespace qppf::grating {

using constants::c_light;
using constants::hbar;
using constants::pi;

// ---------------------------------------------------------------------------
// GratingCalculator
// ---------------------------------------------------------------------------

namespace {

mie::MieSolution solve_at_grating(const ParticleSpec& particle, const GratingSpec& g) {
    particle.validate();
    g.validate();
    double k = g.wavenumber();
    double omega = c_light * k;
    std::complex<double> eps = material::permittivity(*particle.mat, omega);
    std::complex<double> m_rel = std::sqrt(eps);
    if (m_rel.imag() < 0.0) m_rel = -m_rel;
    return mie::solve_mie(particle.radius, k, m_rel);
}

} // namespace

GratingCalculator::GratingCalculator(const ParticleSpec& particle, const GratingSpec& g)
    : solution_(solve_at_grating(particle, g)),
      period_(g.period()),
      k_(g.wavenumber()),
      fluence_(g.fluence) {
    double omega = c_light * k_;
    photon_per_area_unit_ = 1.0 / (hbar * omega);

    double I0 = g.intensity_parameter;
    phi0_unit_ = mie::eikonal_phase(mie::axial_force_amplitude(solution_, I0), I0, k_, 1.0);

    auto cs = mie::cross_sections(solution_);
    sigma_abs_ = cs.abs;
    sigma_sca_ = cs.sca;

    // Azimuth-integrated amplitude correlators on a Gauss-Legendre grid, then
    // projected on Legendre polynomials. The correlators are polynomials of
    // degree <= 2 n_max in mu, so both steps are exact.
    int nmax = solution_.n_max();
    lmax_ = 2 * nmax + 2;
    int ngl = 2 * nmax + 16;
    const auto& gl = mathkit::gauss_legendre(ngl);
    size_t m = gl.nodes.size();

    std::vector<cplx> s1(m), s2(m);
    for (size_t i = 0; i < m; ++i) solution_.amplitudes(gl.nodes[i], s1[i], s2[i]);

    double pref = pi / (k_ * k_);
    std::vector<double> corr_re(m), corr_im(m), corr_w(m);
    for (size_t i = 0; i < m; ++i) {
        size_t j = m - 1 - i; // mirrored node, mu_j = -mu_i
        cplx overlap = pref * (std::conj(s1[i]) * s1[j] - std::conj(s2[i]) * s2[j]);
        corr_re[i] = overlap.real();
        corr_im[i] = overlap.imag();
        corr_w[i] = pref * (std::norm(s1[i]) + std::norm(s2[i]));
    }

    leg_re_.assign(static_cast<size_t>(lmax_) + 1, 0.0);
    leg_im_.assign(static_cast<size_t>(lmax_) + 1, 0.0);
    leg_w_.assign(static_cast<size_t>(lmax_) + 1, 0.0);
    std::vector<double> p_prev(m, 1.0), p_cur(m);
    for (size_t i = 0; i < m; ++i) p_cur[i] = gl.nodes[i];
    for (int l = 0; l <= lmax_; ++l) {
        const std::vector<double>& pl = (l == 0) ? p_prev : p_cur;
        double cr = 0.0, ci = 0.0, cw = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double wp = gl.weights[i] * pl[i];
            cr += wp * corr_re[i];
            ci += wp * corr_im[i];
            cw += wp * corr_w[i];
        }
        double norm = (2.0 * l + 1.0) / 2.0;
        leg_re_[static_cast<size_t>(l)] = norm * cr;
        leg_im_[static_cast<size_t>(l)] = norm * ci;
        leg_w_[static_cast<size_t>(l)] = norm * cw;
        if (l >= 1) {
            for (size_t i = 0; i < m; ++i) {
                double next = ((2.0 * l + 1.0) * gl.nodes[i] * p_cur[i] - l * p_prev[i]) / (l + 1.0);
                p_prev[i] = p_cur[i];
                p_cur[i] = next;
            }
        }
    }
}

GratingFunctions GratingCalculator::functions_at(double s, double fluence) const {
    GratingFunctions f;
    double w = photon_per_area_unit_ * fluence;
    double ks = k_ * s;
    double aks = std::abs(ks);
    double sgn = (s < 0.0) ? -1.0 : 1.0;

    std::vector<double> jl;
    mathkit::fill_spherical_j(lmax_, aks, jl);

    double sum_re_even = 0.0, sum_im_odd = 0.0, sum_w_even = 0.0, sum_w_odd = 0.0;
    double sign_even = 1.0, sign_odd = 1.0;
    for (int l = 0; l <= lmax_; ++l) {
        double base = 2.0 * jl[static_cast<size_t>(l)];
        if ((l & 1) == 0) {
            sum_re_even += leg_re_[static_cast<size_t>(l)] * sign_even * base;
            sum_w_even += leg_w_[static_cast<size_t>(l)] * sign_even * base;
            sign_even = -sign_even;
        } else {
            sum_im_odd += leg_im_[static_cast<size_t>(l)] * sign_odd * base;
            sum_w_odd += leg_w_[static_cast<size_t>(l)] * sign_odd * base;
            sign_odd = -sign_odd;
        }
    }
    double int_re = 2.0 * leg_re_[0];
    double int_w = 2.0 * leg_w_[0];
    double c = std::cos(aks), sn = std::sin(aks);

    f.a = 2.0 * w * (sum_re_even - c * int_re);
    f.b = 2.0 * w * sum_im_odd * sgn;
    f.F = 2.0 * w * (c * sum_w_even + sn * sum_w_odd - int_w);
    f.c_abs = 4.0 * w * sigma_abs_ * (1.0 - std::cos(ks));
    f.zeta_coh = kOperativePhaseRatio * phi0_unit_ * fluence * std::sin(ks);
    return f;
}

// ---------------------------------------------------------------------------
// Coherent Fourier coefficients
// ---------------------------------------------------------------------------

CoherentCoefficients coherent_fourier_coefficients(double phi0, int min_side) {
    double half = 0.5 * phi0;
    int side = std::max(min_side, static_cast<int>(std::ceil(std::abs(half))) + 8);
    while (std::abs(mathkit::bessel_j(side, half)) > 1e-13 ||
           std::abs(mathkit::bessel_j(side - 1, half)) > 1e-13)
        side += 4;

    CoherentCoefficients out;
    out.n_side = side;
    out.values.resize(2 * static_cast<size_t>(side) + 1);
    cplx global = std::exp(cplx(0.0, -half));
    for (int k = -side; k <= side; ++k) {
        cplx ik;
        switch (((k % 4) + 4) % 4) { // (-i)^k
            case 0: ik = {1.0, 0.0}; break;
            case 1: ik = {0.0, -1.0}; break;
            case 2: ik = {-1.0, 0.0}; break;
            default: ik = {0.0, 1.0}; break;
        }
        out.values[static_cast<size_t>(k + side)] = global * ik * mathkit::bessel_j(k, half);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mask Fourier coefficient
// ---------------------------------------------------------------------------

double mask_fourier_coefficient(int n, double dc, double u_plus, double u_minus) {
    if (n < 0) {
        std::swap(u_plus, u_minus);
        n = -n;
    }
    if (dc + std::abs(u_plus) + std::abs(u_minus) < -746.0) return 0.0;
    if (u_plus == 0.0) return n == 0 ? std::exp(dc) : 0.0;

    double p = u_plus * u_minus;

    if (p < -25.0) {
        // H_n(p) = J_n(2 sqrt(|p|)) |p|^{-n/2}; stable against the series'
        // alternating cancellation
        double z = 2.0 * std::sqrt(-p);
        double jn = mathkit::bessel_j(n, z);
        if (jn == 0.0) return 0.0;
        double log_mag = dc +
                         0.5 * n * (std::log(std::abs(u_plus)) - std::log(std::abs(u_minus))) +
                         std::log(std::abs(jn));
        if (log_mag < -746.0) return 0.0;
        double sign = (u_plus < 0.0 && (n & 1)) ? -1.0 : 1.0;
        if (jn < 0.0) sign = -sign;
        return sign * std::exp(log_mag);
    }

    // Direct series sum_m p^m / (m! (m+n)!), factored as u_plus^n / n! * sum.
    double log_prefix = dc + n * std::log(std::abs(u_plus)) - std::lgamma(n + 1.0);
    double sign = (u_plus < 0.0 && (n & 1)) ? -1.0 : 1.0;
    double term = 1.0, sum = 1.0, log_scale = 0.0;
    int mmin = static_cast<int>(std::sqrt(std::abs(p)));
    for (int m = 1; m < 100000; ++m) {
        term *= p / (static_cast<double>(m) * (m + n));
        sum += term;
        if (m > mmin && std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
        if (std::abs(sum) > 1e250) {
            sum *= 1e-250;
            term *= 1e-250;
            log_scale += 250.0 * std::log(10.0);
        }
    }
    if (sum == 0.0) return 0.0;
    if (sum < 0.0) sign = -sign;
    double log_mag = log_prefix + log_scale + std::log(std::abs(sum));
    if (log_mag < -746.0) return 0.0;
    return sign * std::exp(log_mag);
}

// ---------------------------------------------------------------------------
// TalbotEvaluator
// ---------------------------------------------------------------------------

TalbotEvaluator::TalbotEvaluator(FunctionSource source, double phi0, double period)
    : source_(std::move(source)), phi0_(phi0), period_(period) {
    if (!(period_ > 0.0)) throw DomainError("TalbotEvaluator: period must be > 0");
    // slope of the odd channel b at s = 0, Richardson-extrapolated
    double h = 1e-4 * period_;
    double b1 = source_(h).b / h;
    double b2 = source_(2.0 * h).b / (2.0 * h);
    b_lin_slope_ = (4.0 * b1 - b2) / 3.0;
}

TalbotEvaluator::TalbotEvaluator(const GratingCalculator& calc)
    : TalbotEvaluator([c = calc](double s) { return c.functions(s); }, calc.coherent_phase(),
                      calc.period()) {}

TalbotEvaluator::MaskParams TalbotEvaluator::quantum_mask(double s) const {
    GratingFunctions f = source_(s);
    double zeta = phi0_ * std::sin(pi * s / period_);
    MaskParams mp;
    mp.dc = f.F - 0.5 * f.c_abs;
    double diag = f.a + 0.5 * f.c_abs;
    mp.u_plus = 0.5 * (diag + f.b - zeta);
    mp.u_minus = 0.5 * (diag - f.b + zeta);
    return mp;
}

TalbotEvaluator::MaskParams TalbotEvaluator::classical_mask(double s) const {
    // hbar -> 0: the shift-dependent trigonometric factors are replaced by
    // their linearizations; a, F, c_abs are O(s^2) and drop out.
    MaskParams mp;
    mp.dc = 0.0;
    double zeta_lin = phi0_ * pi * s / period_;
    double b_lin = b_lin_slope_ * s;
    mp.u_plus = 0.5 * (b_lin - zeta_lin);
    mp.u_minus = -mp.u_plus;
    return mp;
}

double TalbotEvaluator::quantum(int n, double s) const {
    MaskParams mp = quantum_mask(s);
    return mask_fourier_coefficient(n, mp.dc, mp.u_plus, mp.u_minus);
}

double TalbotEvaluator::classical(int n, double s) const {
    MaskParams mp = classical_mask(s);
    return mask_fourier_coefficient(n, mp.dc, mp.u_plus, mp.u_minus);
}


double TalbotEvaluator::quantum_envelope(double s) const {
    MaskParams mp = quantum_mask(s);
    double e = mp.dc + std::abs(mp.u_plus) + std::abs(mp.u_minus);
    return e > 0.0 ? 1.0 : std::exp(e);
}

double TalbotEvaluator::classical_envelope(double s) const {
    MaskParams mp = classical_mask(s);
    double e = mp.dc + std::abs(mp.u_plus) + std::abs(mp.u_minus);
    return e > 0.0 ? 1.0 : std::exp(e);
}

namespace {

// Fourier coefficients of exp(u+ e^{i t} + u- e^{-i t}) by periodic trapezoid
// (spectrally accurate); reference path.
std::vector<cplx> mask_dft(double u_plus, double u_minus, int side, int grid) {
    std::vector<cplx> samples(static_cast<size_t>(grid));
    for (int p = 0; p < grid; ++p) {
        double t = 2.0 * pi * p / grid;
        cplx e(std::cos(t), std::sin(t));
        samples[static_cast<size_t>(p)] = std::exp(u_plus * e + u_minus / e);
    }
    std::vector<cplx> out(2 * static_cast<size_t>(side) + 1);
    for (int j = -side; j <= side; ++j) {
        cplx acc(0.0, 0.0);
        for (int p = 0; p < grid; ++p) {
            double t = 2.0 * pi * p / grid;
            acc += samples[static_cast<size_t>(p)] * cplx(std::cos(j * t), -std::sin(j * t));
        }
        out[static_cast<size_t>(j + side)] = acc / static_cast<double>(grid);
    }
    return out;
}

} // namespace

double TalbotEvaluator::quantum_exact(int n, double s) const {
    GratingFunctions f = source_(s);
    double xi = s / period_;

    CoherentCoefficients bc = coherent_fourier_coefficients(phi0_);
    int kside = bc.n_side;

    // B^coh_m(xi) = sum_k b_k b*_{k-m} e^{i pi (m-2k) xi}
    auto bcoh = [&](int m) {
        cplx acc(0.0, 0.0);
        for (int k = -kside; k <= kside; ++k) {
            cplx prod = bc.at(k) * std::conj(bc.at(k - m));
            if (prod == cplx(0.0, 0.0)) continue;
            double phase = pi * (m - 2.0 * k) * xi;
            acc += prod * cplx(std::cos(phase), std::sin(phase));
        }
        return acc;
    };

    // Decoherence-mask coefficients in the matching shift convention.
    double diag = f.a + 0.5 * f.c_abs;
    double up = 0.5 * (diag + f.b);
    double um = 0.5 * (diag - f.b);
    int jside = static_cast<int>(std::ceil(std::abs(up) + std::abs(um))) + 24;
    int grid = std::max(512, 8 * (jside + 8));
    std::vector<cplx> rj = mask_dft(up, um, jside, grid);

    cplx acc(0.0, 0.0);
    for (int j = -jside; j <= jside; ++j)
        acc += bcoh(n - j) * rj[static_cast<size_t>(j + jside)];
    acc *= std::exp(f.F - 0.5 * f.c_abs);

    if (std::abs(acc.imag()) > 1e-8 * (1.0 + std::abs(acc.real())))
        throw InternalConsistencyError("talbot: convolution path produced a complex coefficient");
    return acc.real();
}

double TalbotEvaluator::classical_exact(int n, double s) const {
    MaskParams mp = classical_mask(s);
    int side = std::abs(n) + 2;
    int grid = std::max(
        512, 8 * (static_cast<int>(std::abs(mp.u_plus) + std::abs(mp.u_minus)) + side + 8));
    auto coeffs = mask_dft(mp.u_plus, mp.u_minus, side, grid);
    return coeffs[static_cast<size_t>(n + side)].real();
}

double TalbotEvaluator::quantum_validated(int n, double s, double tol) const {
    double fast = quantum(n, s);
    double exact = quantum_exact(n, s);
    if (std::abs(fast - exact) > tol)
        throw InternalConsistencyError("talbot: closed-form and mask paths disagree by " +
                                       std::to_string(std::abs(fast - exact)));
    return exact;
}

} // namespace qppf::grating
