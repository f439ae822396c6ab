#pragma once

#include <functional>
#include <vector>

#include "qppf/errors.hpp"

// Special functions and one-dimensional quadrature used by the physics
// modules. All routines are pure and re-entrant.
namespace qppf::mathkit {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 400;

    void validate() const;
};

// Cylindrical Bessel function of the first kind, J_order(x).
// Downward (Miller) recurrence with sum normalization; series for tiny x.
// Relative error <= ~1e-12 for |x| <= 1e3, |order| <= 1e4.
double bessel_j(int order, double x);

// Spherical Bessel function j_l(x), l >= 0.
double spherical_j(int l, double x);

// Fills out[0..lmax] with j_l(x). Upward recurrence when x > lmax,
// normalized downward recurrence otherwise.
void fill_spherical_j(int lmax, double x, std::vector<double>& out);

// Sine integral Si(x) = Int_0^x sin(u)/u du. Odd in x.
// Series for |x| <= 12, Lentz continued fraction for E1(ix) in the middle
// range, asymptotic auxiliary series beyond. Relative error <= ~1e-10.
double sine_integral(double x);

// Si(x)/x, continuous through x = 0 (value 1).
double sine_integral_over_x(double x);

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval. Throws
// ConvergenceError (carrying best estimate and bound) when the subdivision
// budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& q = {});

// Integral over [a, inf) via the map u = (x-a)/(x-a+scale), scale > 0.
// The scale should match the decay scale of f (e.g. k_B T / hbar for
// blackbody integrands).
double integrate_semi_inf(const std::function<double(double)>& f, double a,
                          double scale, const QuadratureSpec& q = {});

// Integral over (-inf, inf), split at 0 with the same mapping on each side.
double integrate_real_line(const std::function<double(double)>& f, double scale,
                           const QuadratureSpec& q = {});

// Gauss-Legendre nodes/weights on [-1, 1]; cached per n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

} // namespace qppf::mathkit
