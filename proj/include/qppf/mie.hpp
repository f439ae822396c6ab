#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qppf/errors.hpp"

// Mie scattering for a homogeneous sphere in the e^{-i omega t} convention
// (passive media have Im(m_rel) >= 0). Beyond the partial-wave coefficients
// this module provides the polarized far-field amplitudes for the two
// counter-propagating plane waves of a standing-wave grating, cross sections,
// the axial standing-wave force, and the eikonal grating phase.
namespace qppf::mie {

using cplx = std::complex<double>;

class MieSolution {
public:
    MieSolution(double radius, double k, cplx m_rel,
                std::vector<cplx> a, std::vector<cplx> b);

    double radius() const { return radius_; }
    double wavenumber() const { return k_; }
    double size_parameter() const { return k_ * radius_; }
    cplx relative_index() const { return m_rel_; }
    int n_max() const { return static_cast<int>(a_.size()); }
    const std::vector<cplx>& a_coeffs() const { return a_; }
    const std::vector<cplx>& b_coeffs() const { return b_; }

    // Amplitude functions S1, S2 at scattering angle cosine mu, for a plane
    // wave incident along +z.
    void amplitudes(double mu, cplx& s1, cplx& s2) const;

private:
    double radius_;
    double k_;
    cplx m_rel_;
    std::vector<cplx> a_, b_;
};

// Solves the sphere boundary conditions via logarithmic-derivative downward
// recurrence. Truncation order n_max = x + 4.05 x^{1/3} + 2.
// Throws CapabilityError for size parameters above 1e4.
MieSolution solve_mie(double radius, double k, cplx m_rel);

struct CrossSections {
    double sca = 0.0;
    double abs = 0.0;
    double ext = 0.0;
};
CrossSections cross_sections(const MieSolution& s);

// Far-field vector scattering amplitude (Cartesian components, units of m)
// for an x-polarized plane wave travelling along incidence_sign * z,
// scattered into the unit direction n. dsigma/dOmega = |f|^2 and
// sigma_ext = (4 pi / k) Im f_x(incidence direction).
std::array<cplx, 3> scattering_amplitude(const MieSolution& s, int incidence_sign,
                                         const std::array<double, 3>& direction);

// Axial force on the sphere centred at z0 in the standing wave formed by two
// counter-propagating x-polarized plane waves (field antinode at z = 0) with
// combined intensity parameter I0 = c eps0 |E0|^2 / 2. Far-field momentum
// balance: per-component extinction plus scattered-wave recoil.
double axial_force(const MieSolution& s, double intensity_parameter, double z0);

// F0 = F_z(-lambda/8), the force amplitude entering the eikonal phase.
double axial_force_amplitude(const MieSolution& s, double intensity_parameter);

// Eikonal phase phi0 = 8 F0 E_L / (hbar c eps0 a_L k |E0|^2), expressed with
// the intensity parameter I0: phi0 = 4 F0 (E_L/a_L) / (hbar k I0).
double eikonal_phase(double force_amplitude, double intensity_parameter, double k,
                     double fluence);

} // namespace qppf::mie
