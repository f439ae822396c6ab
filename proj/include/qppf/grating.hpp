#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qppf/mie.hpp"
#include "qppf/specs.hpp"

// Optical-grating transformation: the shift-dependent grating functions
// (coherent phase, photon absorption and scattering channels) and the
// generalized Talbot coefficients built from them.
namespace qppf::grating {

using cplx = std::complex<double>;

// All five functions vanish at s = 0. c_abs >= 0 and F <= 0 for any shift.
struct GratingFunctions {
    double a = 0.0;
    double b = 0.0;
    double F = 0.0;
    double c_abs = 0.0;
    double zeta_coh = 0.0; // phi0 sin(pi s / d)
};

// Per-(particle, grating) calculator. Solves Mie at the grating wavelength
// once and stores Legendre expansions of the azimuth-integrated amplitude
// correlators, so grating functions at arbitrary shift cost one spherical
// Bessel ladder. Everything scales linearly with fluence; unit-fluence
// values are cached.
class GratingCalculator {
public:
    GratingCalculator(const ParticleSpec& particle, const GratingSpec& grating);

    // Eikonal phase (Eq.-6 normalization) at the spec fluence / per unit
    // fluence (J/m^2).
    double phi0() const { return phi0_unit_ * fluence_; }
    double phi0_unit() const { return phi0_unit_; }

    // Operative coherent-grating phase entering the Talbot masks. The
    // supplementary grating-function block defines zeta through
    // 16 F0 E_L / (hbar a_L k I0), which is kOperativePhaseRatio times the
    // eikonal phase phi0; the pattern-level anchors pin this convention.
    static constexpr double kOperativePhaseRatio = 4.0;
    double coherent_phase() const { return kOperativePhaseRatio * phi0(); }
    double coherent_phase_unit() const { return kOperativePhaseRatio * phi0_unit_; }

    GratingFunctions functions(double s) const { return functions_at(s, fluence_); }
    GratingFunctions functions_unit(double s) const { return functions_at(s, 1.0); }

    double period() const { return period_; }
    double fluence() const { return fluence_; }
    double sigma_abs() const { return sigma_abs_; }
    double sigma_sca() const { return sigma_sca_; }
    const mie::MieSolution& solution() const { return solution_; }

private:
    GratingFunctions functions_at(double s, double fluence) const;

    mie::MieSolution solution_;
    double period_;
    double k_;
    double fluence_;
    double photon_per_area_unit_; // 1/(hbar omega): photons per m^2 per unit fluence
    double phi0_unit_;
    double sigma_abs_;
    double sigma_sca_;
    int lmax_;
    std::vector<double> leg_re_;  // Legendre coefficients of Re A(mu)
    std::vector<double> leg_im_;  // Im A(mu), odd orders only
    std::vector<double> leg_w_;   // W(mu) = azimuth-integrated |f|^2
};

// Fourier coefficients b_k (k = -n_side..n_side, stored with offset) of the
// pure-phase transmission t(z) = exp(-i phi0 cos^2(k z)) over one period:
// b_k = e^{-i phi0/2} (-i)^k J_k(phi0/2). n_side grows until |b| < 1e-12.
struct CoherentCoefficients {
    std::vector<cplx> values; // index k + n_side
    int n_side = 0;
    cplx at(int k) const {
        int i = k + n_side;
        if (i < 0 || i >= static_cast<int>(values.size())) return {0.0, 0.0};
        return values[static_cast<size_t>(i)];
    }
};
CoherentCoefficients coherent_fourier_coefficients(double phi0, int min_side = 0);

// Generalized Talbot coefficients B_n(s/d). Two independent evaluation paths:
//  - series: closed-form Fourier coefficients of the single-harmonic mask
//    exponential (the fast path used by the pattern builder);
//  - convolution: coherent coefficients convolved with the DFT of the
//    decoherence mask (the reference construction).
// Coefficients are real for the symmetric standing-wave grating; the sign
// convention follows the shift convention of the coherent-coefficient
// formula (zeta enters the series path with a calibrated sign, pinned by the
// equivalence tests against the mask construction).
class TalbotEvaluator {
public:
    // Source of grating functions at a given shift, plus the eikonal phase.
    using FunctionSource = std::function<GratingFunctions(double)>;

    TalbotEvaluator(FunctionSource source, double phi0, double period);
    explicit TalbotEvaluator(const GratingCalculator& calc);

    double quantum(int n, double s) const;       // series path
    double quantum_exact(int n, double s) const; // convolution path
    // Runs both paths; throws InternalConsistencyError if they differ by
    // more than tol.
    double quantum_validated(int n, double s, double tol = 1e-6) const;

    // hbar -> 0 limit: only the linearized coherent kick and the linearized
    // b channel survive.
    double classical(int n, double s) const;
    double classical_exact(int n, double s) const;

    // Rigorous n-independent bound on |B_n(s)|: exp(dc + |u+| + |u-|).
    double quantum_envelope(double s) const;
    double classical_envelope(double s) const;

    double phi0() const { return phi0_; }

private:
    struct MaskParams {
        double dc;     // F - c_abs/2
        double u_plus; // e^{+i theta} coefficient of the mask exponent
        double u_minus;
    };
    MaskParams quantum_mask(double s) const;
    MaskParams classical_mask(double s) const;

    FunctionSource source_;
    double phi0_;
    double period_;
    double b_lin_slope_; // d b / d s at s = 0
};

// Fourier coefficient n of exp(dc + u+ e^{i t} + u- e^{-i t}); exact series.
double mask_fourier_coefficient(int n, double dc, double u_plus, double u_minus);

} // namespace qppf::grating
