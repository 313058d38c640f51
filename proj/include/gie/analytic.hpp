#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gie/signedlog.hpp"

namespace gie::analytic {

// Closed-form signal/variance/SNR evaluation for both measurement schemes,
// stable from N = 1 up to N ~ 1e16. Signals are evaluated through signed-log
// factor products; the variance assemblies (which cancel to ~80 digits at the
// extreme end) run internally at 160 decimal digits and are returned as
// doubles.

struct OpenSchemeParams {
  std::uint64_t atoms = 1;   // N
  double gamma = 0.0;        // effective self-phase
  double lambda = 0.0;       // cross-phase
  double delta = 0.0;        // phi - close phase of the ab interferometer
  std::uint64_t reps = 2;    // M
};

struct ClosedSchemeParams {
  std::uint64_t atoms = 1;
  double gamma = 0.0;
  double lambda = 0.0;
  double mu = 0.0;           // close - phi, ab side
  double nu = 0.0;           // close' - phi', cd side
  std::uint64_t reps = 2;
};

struct SnrReport {
  double signal = 0.0;
  double variance = 0.0;
  double snr = 0.0;
  enum class Regime { Exact, LogDomainApprox } regime = Regime::Exact;
  std::vector<std::pair<std::string, double>> log_factors;
};

struct ClosedMoments {
  double j_mean, jp_mean;    // <J_phi^{ab}>, <J_phi'^{cd}>
  double j2, jp2;            // second moments
  double j2jp, jjp2;         // mixed third moments
  double j2jp2;              // <(J J')^2>
  double signal;             // covariance S
};

struct PurityResult {
  double purity = 1.0;
  double renyi2 = 0.0;
  bool asymptotic = false;   // true when the large-N expansion was used
};

double signal_open(const OpenSchemeParams& p);
double variance_open(const OpenSchemeParams& p);
// The printed one-open variance formula (bracket * N^2/64 / M, oracle
// calibrated). Exact at |delta| = pi/2; deviates at the percent level away
// from it. Kept for the documented discrepancy report.
double variance_open_printed(const OpenSchemeParams& p);
SnrReport snr_open(const OpenSchemeParams& p);
double snr_open_simplified(double atoms, double lambda, double reps);

double signal_closed(const ClosedSchemeParams& p);
ClosedMoments moments_closed(const ClosedSchemeParams& p);
double variance_closed(const ClosedSchemeParams& p);
SnrReport snr_closed(const ClosedSchemeParams& p);

// Exact binomial sum for N <= 1e6, asymptotic 1 - lambda^2 N^2 / 2 beyond
// (requires lambda^2 N^2 < 0.1, else throws).
PurityResult purity_analytic(std::uint64_t atoms, double lambda);

double snr_single(std::uint64_t atoms, double gamma, double delta,
                  std::uint64_t reps);

// Side-by-side comparison of the exact cumulant variance and the printed
// one-open formula across closing phases, showing where they agree.
std::string fullvar_discrepancy_report();

}  // namespace gie::analytic
