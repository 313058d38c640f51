#include "gie/spheroid.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gie/constants.hpp"

namespace gie::spheroid {

namespace {

constexpr double kPi = 3.14159265358979323846;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

}  // namespace

double SpheroidGeometry::focal() const {
  return std::sqrt(std::max(a * a - c * c, 0.0));
}

double SpheroidGeometry::ellipticity() const { return focal() / a; }

void SpheroidGeometry::validate() const {
  if (!(c > 0.0) || !(a >= c))
    throw std::invalid_argument(
        "spheroid must be oblate or spherical: need a >= c > 0");
  if (!(d >= 2.0 * c))
    throw std::invalid_argument(
        "clouds overlap: need center separation d >= 2c");
}

PotentialIntermediates potential_intermediates(double r, double z, double a,
                                               double c) {
  const double l2 = a * a - c * c;
  PotentialIntermediates q;
  const double inner = z * z * z * z + 2.0 * z * z * (r * r + l2) +
                       (l2 - r * r) * (l2 - r * r);
  q.A = r * r + z * z + std::sqrt(std::max(inner, 0.0));
  q.B = std::sqrt(q.A + l2);
  q.C = r * r + 2.0 * z * z;
  q.D = r * r - 2.0 * z * z;
  q.E = std::sqrt(std::max(q.A - l2, 0.0));
  return q;
}

double oblate_external_potential(double r, double z, double m_src, double a,
                                 double c) {
  using constants::G;
  if (!(c > 0.0) || !(a >= c))
    throw std::invalid_argument("need a >= c > 0");
  const double u = (r / a) * (r / a) + (z / c) * (z / c);
  if (u < 1.0 - 1e-12)
    throw std::invalid_argument("field point lies inside the spheroid");
  const double l = std::sqrt(std::max(a * a - c * c, 0.0));
  const double rho = std::sqrt(r * r + z * z);
  if (l < 1e-6 * a) return G * m_src / rho;

  const PotentialIntermediates q = potential_intermediates(r, z, a, c);
  if (q.E >= 1e-9 * a) {
    const double arg = std::min(std::sqrt(2.0) * l / q.B, 1.0);
    return 3.0 * G * m_src / (4.0 * l * l * l) *
           ((2.0 * l * l - q.D) * std::asin(arg) +
            std::sqrt(2.0) * l * (q.A * q.D - l * l * q.C) / (q.E * q.B * q.B));
  }
  // Near the focal ring (E -> 0) the printed form is 0/0; evaluate the
  // equivalent regular expression in oblate spheroidal coordinates
  // (xi = E/(sqrt(2) l), eta^2 = 1 + xi^2 - (r^2+z^2)/l^2).
  const double xi = q.E / (std::sqrt(2.0) * l);
  double eta2 = 1.0 + xi * xi - (r * r + z * z) / (l * l);
  eta2 = std::clamp(eta2, 0.0, 1.0);
  const double acot = xi == 0.0 ? kPi / 2.0 : std::atan(1.0 / xi);
  const double shape = 1.0 - 3.0 * eta2;
  return 3.0 * G * m_src / (4.0 * l) *
         ((1.0 + eta2 - xi * xi * shape) * acot + xi * shape);
}

CouplingResult cross_coupling(double m_atom, const SpheroidGeometry& geom,
                              const QuadratureSpec& quad) {
  geom.validate();
  if (!(m_atom > 0.0)) throw std::invalid_argument("atom mass must be > 0");
  if (!(quad.rel_tol > 0.0) && !(quad.abs_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be positive");
  const double a = geom.a, c = geom.c, d = geom.d;
  const double rho0 = m_atom / (4.0 / 3.0 * kPi * a * a * c);
  const double tol = quad.rel_tol > 0.0 ? quad.rel_tol : 1e-8;

  // Depth so that worst-case evaluations stay under max_evals (15 points per
  // panel, nested in two dimensions).
  const double per_dim =
      std::sqrt(std::max(double(quad.max_evals) / 225.0, 4.0));
  const unsigned depth = std::min(
      15u, std::max(4u, unsigned(std::log2(per_dim))));

  auto inner = [&](double z) {
    const double dz = (z - d) / c;
    const double rmax2 = 1.0 - dz * dz;
    if (rmax2 <= 0.0) return 0.0;
    const double rmax = a * std::sqrt(rmax2);
    auto f = [&](double r) {
      return r * oblate_external_potential(r, z, m_atom, a, c);
    };
    double err = 0.0;
    return GK::integrate(f, 0.0, rmax, depth, tol / 4.0, &err);
  };
  double outer_err = 0.0;
  const double integral =
      GK::integrate(inner, d - c, d + c, depth, tol / 4.0, &outer_err);
  const double pref = 0.5 * 2.0 * kPi * rho0;
  CouplingResult res;
  res.value = -pref * integral;  // attractive: lambda' < 0
  res.abs_err = pref * outer_err + std::fabs(res.value) * tol;
  const double goal =
      std::max(quad.abs_tol, 10.0 * tol * std::fabs(res.value));
  if (pref * outer_err > goal && goal > 0.0)
    throw std::runtime_error(
        "cross-coupling quadrature did not converge; error estimate " +
        std::to_string(pref * outer_err) + " J");
  return res;
}

double self_coupling(double m_atom, double a, double c) {
  using constants::G;
  if (!(c > 0.0) || !(a >= c))
    throw std::invalid_argument("need a >= c > 0");
  const double e = std::sqrt(std::max(a * a - c * c, 0.0)) / a;
  const double shape = e < 1e-8 ? 1.0 : std::asin(e) / e;
  return 3.0 * G * m_atom * m_atom / (5.0 * a) * shape;
}

EllipticityResult optimal_ellipticity(double d_over_c, double volume,
                                      double m_atom,
                                      const QuadratureSpec& quad) {
  using constants::G;
  if (!(d_over_c >= 2.0))
    throw std::invalid_argument("separation ratio d/c must be >= 2");
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be > 0");
  const double r_sphere = std::cbrt(volume / (4.0 / 3.0 * kPi));

  auto coupling_at = [&](double e) {
    const double a = r_sphere * std::pow(1.0 - e * e, -1.0 / 6.0);
    const double c = a * std::sqrt(1.0 - e * e);
    SpheroidGeometry g{a, c, d_over_c * c};
    return std::fabs(cross_coupling(m_atom, g, quad).value);
  };

  // Coarse bracket, then golden-section refinement.
  const double e_lo = 0.0, e_hi = 0.999;
  const int coarse = 14;
  double best_e = 0.0, best_v = -1.0;
  for (int i = 0; i <= coarse; ++i) {
    double e = e_lo + (e_hi - e_lo) * i / coarse;
    double v = coupling_at(e);
    if (v > best_v) {
      best_v = v;
      best_e = e;
    }
  }
  double lo = std::max(e_lo, best_e - (e_hi - e_lo) / coarse);
  double hi = std::min(e_hi, best_e + (e_hi - e_lo) / coarse);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = coupling_at(x1), f2 = coupling_at(x2);
  while (hi - lo > 2e-4) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = coupling_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = coupling_at(x1);
    }
  }
  EllipticityResult res;
  res.e_star = 0.5 * (lo + hi);
  res.coupling = coupling_at(res.e_star);
  const double sphere_value = G * m_atom * m_atom / (2.0 * d_over_c * r_sphere);
  res.enhancement = res.coupling / sphere_value;
  return res;
}

}  // namespace gie::spheroid
