#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qppf/errors.hpp"

// Bulk material and residual-gas property models. Materials carry a tabulated
// complex permittivity eps(omega); derived quantities (polarizability, van der
// Waals C6) are computed on demand. Instances are immutable after load and
// safe to share across threads.
namespace qppf::material {

struct Material {
    std::string name;
    double density = 0.0;           // kg/m^3
    double specific_heat = 0.0;     // J/(kg K)
    double ionization_energy = 0.0; // J
    std::vector<double> omega;      // rad/s, strictly increasing
    std::vector<double> eps_re;
    std::vector<double> eps_im;     // >= 0 (passive medium)

    // Out-of-range omega policy: clamp to the nearest node (default) or throw.
    bool clamp_out_of_range = true;

    void validate() const;
};

struct GasSpecies {
    std::string name;
    double mass = 0.0;                    // kg
    double polarizability_volume = 0.0;   // m^3, the quantity alpha/(4 pi eps0)
    double ionization_energy = 0.0;       // J

    void validate() const;
};

// Parses the documented material file format: '#' comments, "key = value"
// header lines, then whitespace-separated "omega eps_re eps_im" rows.
Material load_material(const std::string& path);

// Parses a gas property file ("key = value" lines only).
GasSpecies load_gas(const std::string& path);

// Linearly interpolated complex permittivity at omega. If omega falls outside
// the table, clamps to the nearest node and sets *clamped (when the material
// allows it), or throws DomainError otherwise.
std::complex<double> permittivity(const Material& m, double omega,
                                  bool* clamped = nullptr);

// Clausius-Mossotti polarizability chi = 4 pi eps0 R^3 (eps-1)/(eps+2) in SI
// units (C m^2 / V). Throws DomainError at the eps = -2 singularity.
std::complex<double> clausius_mossotti(const Material& m, double omega, double radius);

// Static polarizability: Clausius-Mossotti evaluated at the lowest table node.
std::complex<double> static_polarizability(const Material& m, double radius);

// Van der Waals coefficient between the sphere and a gas particle,
// C6 = 3 alpha alpha_g I I_g / (32 pi^2 eps0^2 (I + I_g)), static alphas.
double c6_coefficient(const Material& m, double radius, const GasSpecies& gas);

} // namespace qppf::material
