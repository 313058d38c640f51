#include "gie/analytic.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gie {

SignedLog log_cos_pow(double x, double n) {
  if (n == 0.0) return SignedLog{0.0, 1};
  int quo = 0;
  double r = std::remquo(x, M_PI, &quo);  // cos x = (-1)^quo cos r, |r|<=pi/2
  double s = std::sin(0.5 * r);
  double logc = std::log1p(-2.0 * s * s);
  if (std::isinf(logc))  // cos x == 0: exact zero for n > 0
    return SignedLog{-std::numeric_limits<double>::infinity(), n > 0 ? 0 : 1};
  bool base_negative = (quo & 1) != 0;
  bool n_odd = std::fabs(std::fmod(n, 2.0)) == 1.0;
  int sign = (base_negative && n_odd) ? -1 : 1;
  return SignedLog{n * logc, sign};
}

}  // namespace gie

namespace gie::analytic {

namespace {

using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<160>, boost::multiprecision::et_off>;

// cos^n(x) at working precision; n integer-valued (possibly negative, as in
// the N-2 exponents at N = 1).
Real cos_pow(const Real& x, const Real& n) {
  if (n == 0) return Real(1);
  Real c = cos(x);
  if (c == 0) {
    if (n > 0) return Real(0);
    throw std::runtime_error("cos^n with cos x = 0 and n < 0");
  }
  int sign = 1;
  if (c < 0) {
    if (fmod(n, Real(2)) != 0) sign = -1;
    c = -c;
  }
  Real v = exp(n * log(c));
  return sign < 0 ? -v : v;
}

void validate_common(std::uint64_t atoms, std::uint64_t reps) {
  if (atoms < 1) throw std::invalid_argument("atoms must be >= 1");
  if (reps < 2) throw std::invalid_argument("reps must be >= 2");
}

SnrReport::Regime regime_for(std::uint64_t atoms) {
  return atoms <= 64 ? SnrReport::Regime::Exact
                     : SnrReport::Regime::LogDomainApprox;
}

struct OpenMoments {
  Real j, j2, s, jk2, j2k2;
};

OpenMoments open_moments(std::uint64_t atoms, double gamma_, double lambda_,
                         double delta_) {
  const Real n(atoms), g(gamma_), l(lambda_), d(delta_);
  const Real c1 = cos_pow(g, n - 1);
  const Real cln = cos_pow(l, n);
  OpenMoments m;
  m.j = n / 2 * c1 * cos(d) * cln;
  m.s = n * n / 4 * c1 * sin(d) * cos_pow(l, n - 1) * sin(l);
  Real t2 = 0, t22 = 0;
  if (atoms >= 2) {
    const Real c2 = cos_pow(2 * g, n - 2);
    t2 = (n - 1) * c2 * cos(2 * d) * cos_pow(2 * l, n);
    t22 = (n - 1) * c2 * cos(2 * d) *
          (cos_pow(2 * l, n) -
           (n - 1) * cos_pow(2 * l, n - 2) * sin(2 * l) * sin(2 * l));
  }
  m.j2 = n / 8 * ((n + 1) + t2);
  Real jk2_inner = cln;
  if (atoms >= 2)
    jk2_inner -= (n - 1) * cos_pow(l, n - 2) * sin(l) * sin(l);
  m.jk2 = n * n / 8 * c1 * cos(d) * jk2_inner;
  m.j2k2 = n * n / 32 * ((n + 1) + t22);
  return m;
}

Real variance_open_real(const OpenSchemeParams& p) {
  OpenMoments m = open_moments(p.atoms, p.gamma, p.lambda, p.delta);
  const Real n(p.atoms);
  Real var_m = m.j2k2 - 2 * m.jk2 * m.j + n / 4 * m.j * m.j - m.s * m.s;
  return var_m / Real(p.reps);
}

struct ClosedMomentsReal {
  Real j, jp, j2, jp2, j2jp, jjp2, j2jp2, s;
};

Real closed_mixed_third(const Real& n, const Real& g, const Real& l,
                        const Real& mu, const Real& nu, bool has_n2) {
  Real first = 2 * cos(nu) * cos_pow(g, n - 1) * cos_pow(l, n - 2) *
               (n + cos(2 * l));
  Real second = 0;
  if (has_n2)
    second = (n - 1) * (cos(2 * mu + nu) * cos_pow(2 * g + l, n - 2) *
                            cos_pow(g + 2 * l, n - 1) +
                        cos(2 * mu - nu) * cos_pow(2 * g - l, n - 2) *
                            cos_pow(g - 2 * l, n - 1));
  return n * n / 32 * (first + second);
}

ClosedMomentsReal closed_moments_real(const ClosedSchemeParams& p) {
  const Real n(p.atoms), g(p.gamma), l(p.lambda), mu(p.mu), nu(p.nu);
  const bool has_n2 = p.atoms >= 2;
  ClosedMomentsReal m;
  const Real mean_base = n / 2 * cos_pow(g, n - 1) * cos_pow(l, n);
  m.j = mean_base * cos(mu);
  m.jp = mean_base * cos(nu);
  Real pair2 = 0, pair2p = 0, pair22 = 0;
  if (has_n2) {
    const Real c2g = cos_pow(2 * g, n - 2);
    const Real c2l = cos_pow(2 * l, n);
    pair2 = (n - 1) * cos(2 * mu) * c2g * c2l;
    pair2p = (n - 1) * cos(2 * nu) * c2g * c2l;
    pair22 =
        (n - 1) *
        (2 * (cos(2 * mu) + cos(2 * nu)) * c2g * cos_pow(2 * l, n - 2) *
             (n + cos(4 * l)) +
         (n - 1) * cos(2 * (mu + nu)) * cos_pow(2 * (g + l), 2 * (n - 2)) +
         (n - 1) * cos(2 * (mu - nu)) * cos_pow(2 * (g - l), 2 * (n - 2)));
  }
  m.j2 = n / 8 * (1 + n + pair2);
  m.jp2 = n / 8 * (1 + n + pair2p);
  m.j2jp = closed_mixed_third(n, g, l, mu, nu, has_n2);
  m.jjp2 = closed_mixed_third(n, g, l, nu, mu, has_n2);
  m.j2jp2 = n * n / 128 * (2 * (n + 1) * (n + 1) + pair22);
  m.s = n * n / 8 *
        (cos(mu + nu) * cos_pow(l + g, 2 * (n - 1)) +
         cos(mu - nu) * cos_pow(l - g, 2 * (n - 1)) -
         2 * cos(mu) * cos(nu) * cos_pow(g, 2 * (n - 1)) * cos_pow(l, 2 * n));
  return m;
}

Real variance_closed_real(const ClosedSchemeParams& p) {
  ClosedMomentsReal m = closed_moments_real(p);
  // The printed seven-term combination is the raw-moment expansion; the exact
  // estimator variance (kappa22 + kappa20 kappa02 + S^2) is that combination
  // minus <J J'>^2.
  Real jjp = m.s + m.j * m.jp;
  Real combo = m.j2jp2 - 2 * m.j2jp * m.jp - 2 * m.jjp2 * m.j +
               m.j2 * m.jp * m.jp + m.jp2 * m.j * m.j + 6 * jjp * m.j * m.jp -
               4 * m.j * m.j * m.jp * m.jp;
  return (combo - jjp * jjp) / Real(p.reps);
}

}  // namespace

double signal_open(const OpenSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  const Real n(p.atoms), g(p.gamma), l(p.lambda), d(p.delta);
  return double(n * n / 4 * sin(d) * cos_pow(g, n - 1) * cos_pow(l, n - 1) *
                sin(l));
}

double variance_open(const OpenSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  return double(variance_open_real(p));
}

double variance_open_printed(const OpenSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  const Real n(p.atoms), g(p.gamma), l(p.lambda);
  const Real nu(-p.delta);  // the printed bracket uses nu = close - phi
  Real mid = 0;
  if (p.atoms >= 2)
    mid = (n - 1) * cos(2 * nu) * cos_pow(2 * g, n - 2) *
          cos_pow(2 * l, n - 2) * (2 + n * (cos(4 * l) - 1));
  Real last = 4 * n * cos(nu) * cos(nu) * cos_pow(g, 2 * n - 2) *
              cos_pow(l, 2 * n - 2) *
              (2 * n * sin(l) * sin(l) + cos(l) * cos(l) - 2);
  Real bracket = 2 * (n + 1) + mid + last;
  return double(bracket * n * n / 64 / Real(p.reps));
}

SnrReport snr_open(const OpenSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  SnrReport rep;
  rep.regime = regime_for(p.atoms);
  OpenMoments m = open_moments(p.atoms, p.gamma, p.lambda, p.delta);
  Real var = variance_open_real(p);
  rep.signal = double(m.s);
  rep.variance = double(var);
  if (!(var > 0))
    throw std::runtime_error("variance is not positive; SNR undefined");
  rep.snr = double(abs(m.s) / sqrt(var));
  SignedLog lg = log_cos_pow(p.gamma, double(p.atoms - 1));
  SignedLog ll = log_cos_pow(p.lambda, double(p.atoms - 1));
  rep.log_factors = {
      {"log|cos^(N-1) gamma|", lg.logmag},
      {"log|cos^(N-1) lambda|", ll.logmag},
      {"log|sin lambda|", std::log(std::fabs(std::sin(p.lambda)))},
      {"log|sin delta|", std::log(std::fabs(std::sin(p.delta)))},
      {"log(N^2/4)", 2.0 * std::log((double)p.atoms) - std::log(4.0)},
      {"log variance", double(log(abs(var)))},
  };
  return rep;
}

double snr_open_simplified(double atoms, double lambda, double reps) {
  return std::sqrt(reps) * std::fabs(lambda) * atoms;
}

double signal_closed(const ClosedSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  return double(closed_moments_real(p).s);
}

ClosedMoments moments_closed(const ClosedSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  ClosedMomentsReal m = closed_moments_real(p);
  return ClosedMoments{double(m.j),    double(m.jp),   double(m.j2),
                       double(m.jp2),  double(m.j2jp), double(m.jjp2),
                       double(m.j2jp2), double(m.s)};
}

double variance_closed(const ClosedSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  return double(variance_closed_real(p));
}

SnrReport snr_closed(const ClosedSchemeParams& p) {
  validate_common(p.atoms, p.reps);
  SnrReport rep;
  rep.regime = regime_for(p.atoms);
  ClosedMomentsReal m = closed_moments_real(p);
  Real var = variance_closed_real(p);
  rep.signal = double(m.s);
  rep.variance = double(var);
  if (!(var > 0))
    throw std::runtime_error("variance is not positive; SNR undefined");
  rep.snr = double(abs(m.s) / sqrt(var));
  SignedLog lg = log_cos_pow(p.gamma, 2.0 * double(p.atoms - 1));
  SignedLog lpl = log_cos_pow(p.lambda + p.gamma, 2.0 * double(p.atoms - 1));
  SignedLog lml = log_cos_pow(p.lambda - p.gamma, 2.0 * double(p.atoms - 1));
  rep.log_factors = {
      {"log|cos^2(N-1)(lambda+gamma)|", lpl.logmag},
      {"log|cos^2(N-1)(lambda-gamma)|", lml.logmag},
      {"log|cos^2(N-1) gamma|", lg.logmag},
      {"log(N^2/8)", 2.0 * std::log((double)p.atoms) - std::log(8.0)},
      {"log variance", double(log(abs(var)))},
  };
  return rep;
}

PurityResult purity_analytic(std::uint64_t atoms, double lambda) {
  if (atoms < 1) throw std::invalid_argument("atoms must be >= 1");
  PurityResult res;
  if (atoms <= 1000000) {
    // mu = 2^{-2N} sum_k C(2N,k) cos^{2N}(lambda (N-k)), all terms >= 0.
    const double n = double(atoms);
    const double two_n = 2.0 * n;
    double sum = 0.0;
    const double log2 = std::log(2.0);
    for (std::uint64_t k = 0; k <= 2 * atoms; ++k) {
      double logbin = std::lgamma(two_n + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(two_n - k + 1.0);
      SignedLog c = log_cos_pow(lambda * (n - double(k)), two_n);
      if (c.sign == 0) continue;
      sum += std::exp(logbin - two_n * log2 + c.logmag);
    }
    res.purity = std::min(sum, 1.0);
    res.renyi2 = -0.5 * std::log(res.purity);
    return res;
  }
  const double x = lambda * lambda * double(atoms) * double(atoms);
  if (!(x < 0.1))
    throw std::runtime_error(
        "purity asymptotic form requires lambda^2 N^2 < 0.1");
  res.asymptotic = true;
  res.purity = 1.0 - 0.5 * x;
  res.renyi2 = -0.5 * std::log1p(-0.5 * x);
  return res;
}

double snr_single(std::uint64_t atoms, double gamma_, double delta,
                  std::uint64_t reps) {
  validate_common(atoms, std::max<std::uint64_t>(reps, 2));
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const Real n(atoms), g(gamma_), d(delta);
  Real num = sqrt(2 * n) * cos(d) * cos_pow(g, n - 1);
  Real den2 = (1 + n) - 2 * n * cos(d) * cos(d) * cos_pow(g, 2 * (n - 1));
  if (atoms >= 2) den2 += (n - 1) * cos(2 * d) * cos_pow(2 * g, n - 2);
  if (!(den2 > 0))
    throw std::runtime_error(
        "single-interferometer variance vanishes at this phase");
  return double(sqrt(Real(reps)) * abs(num) / sqrt(den2));
}

std::string fullvar_discrepancy_report() {
  std::ostringstream out;
  out << "One-open variance: printed formula (bracket*N^2/64) vs exact "
         "cumulant assembly\n"
      << "Printed formula calibration: at lambda=gamma=0, nu=pi/2 the bracket "
         "alone gives 4 sin^2 nu;\nthe exact independent-state value is "
         "(N^2/16) sin^2 nu, so the bracket carries an\nN^2/64 prefactor "
         "(certified against the oracle below). At lambda = gamma = 0 the\n"
         "printed form is exact for every nu; with interactions on it is a "
         "truncation of the\ncumulant assembly and deviates at O(lambda^2), "
         "as the table shows.\n\n";
  out << "    N  lambda  gamma      nu     M*Var(exact)   M*Var(printed)   "
         "rel.diff\n";
  for (std::uint64_t n : {3ull, 6ull}) {
    for (double lam : {0.04, 0.1}) {
      for (double nu : {M_PI / 2, 1.0, 0.3}) {
        OpenSchemeParams p{n, 0.07, lam, -nu, 2};
        double ve = variance_open(p) * 2.0;
        double vp = variance_open_printed(p) * 2.0;
        char line[128];
        std::snprintf(line, sizeof line,
                      "  %3llu  %6.2f  %5.2f  %6.4f  %15.10f  %15.10f  %9.2e\n",
                      (unsigned long long)n, lam, 0.07, nu, ve, vp,
                      std::fabs(vp - ve) / std::fabs(ve));
        out << line;
      }
    }
  }
  out << "\nThe engine reports the exact cumulant assembly; the printed "
         "route is exposed\nseparately for inspection.\n";
  return out.str();
}

}  // namespace gie::analytic
