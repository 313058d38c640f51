#pragma once

#include <cstddef>

namespace gie::spheroid {

// Gravitational coupling constants for two uniform oblate-spheroid clouds
// separated by d along the shared symmetry axis.

struct SpheroidGeometry {
  double a = 0.0;  // equatorial radius, m
  double c = 0.0;  // polar radius, m
  double d = 0.0;  // center separation along the symmetry axis, m

  double focal() const;        // l = sqrt(a^2 - c^2)
  double ellipticity() const;  // e = l/a in [0, 1)
  void validate() const;       // a >= c > 0, d >= 2c (no overlap)
};

struct QuadratureSpec {
  double abs_tol = 0.0;
  double rel_tol = 1e-8;
  std::size_t max_evals = 10000000;
};

// Intermediates of the printed exterior-potential formula, exposed for
// inspection and tests.
struct PotentialIntermediates {
  double A, B, C, D, E;
};

PotentialIntermediates potential_intermediates(double r, double z, double a,
                                               double c);

// Exterior potential of a uniform oblate spheroid of mass m_src at cylindrical
// point (r, z), positive-kernel convention (sphere limit G m / rho).
double oblate_external_potential(double r, double z, double m_src, double a,
                                 double c);

struct CouplingResult {
  double value = 0.0;    // lambda', J; negative (attractive)
  double abs_err = 0.0;  // quadrature error estimate on |value|
};

// lambda'_{cross} = -(1/2) * integral of rho(x) Phi_other(x) over one cloud.
CouplingResult cross_coupling(double m_atom, const SpheroidGeometry& geom,
                              const QuadratureSpec& quad);

// |lambda'_self| = (3 G m^2 / 5l) asin(e); sphere limit 3 G m^2 / (5a).
double self_coupling(double m_atom, double a, double c);

struct EllipticityResult {
  double e_star = 0.0;       // argmax ellipticity
  double enhancement = 1.0;  // |lambda'(e*)| / sphere value under the same rule
  double coupling = 0.0;     // |lambda'| at the optimum, J
};

// Maximizes |cross_coupling| over ellipticity at fixed cloud volume with the
// separation tied to the shape by d = d_over_c * c(e); the enhancement is
// relative to equal-volume spheres under the same rule (d = d_over_c * R).
EllipticityResult optimal_ellipticity(double d_over_c, double volume,
                                      double m_atom, const QuadratureSpec& quad);

}  // namespace gie::spheroid
