#pragma once

// Physical constants (CODATA 2018), SI units throughout.
namespace qppf::constants {

inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double h_planck = 6.62607015e-34; // J s
inline constexpr double c_light = 2.99792458e8;   // m/s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double eps0 = 8.8541878128e-12;  // F/m
inline constexpr double G_newton = 6.67430e-11;   // m^3/(kg s^2)
inline constexpr double amu = 1.66053906660e-27;  // kg

// Reference mass of the CSL model (one atomic mass unit).
inline constexpr double m0_csl = amu;

inline constexpr double pi = 3.14159265358979323846;

} // namespace qppf::constants
