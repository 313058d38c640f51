#pragma once

#include <cstdint>
#include <string>

#include "gie/analytic.hpp"
#include "gie/fock.hpp"
#include "gie/spheroid.hpp"

namespace gie::experiment {

// Translation from a physical experiment description to the dimensionless
// parameters of the analytic engine, plus the feasibility side constraints
// (density cap, three-body lifetime, scattering suppression).

struct Species {
  std::string name;
  double atom_mass_kg = 0.0;
  double loss_L_cm6_s = 0.0;  // three-body coefficient; 0 = not tabulated
};

// erbium, cesium, rubidium; throws on unknown names.
Species species_by_name(const std::string& name);

enum class Scheme { OneOpen, BothClosed };

struct ExperimentConfig {
  Species species;
  double atoms = 1.0;  // N per interferometer; integer-valued, may be 1e16
  spheroid::SpheroidGeometry geom;
  double time_s = 1.0;
  std::uint64_t reps = 2;
  std::uint64_t setups = 1;
  double squeeze_db = 0.0;
  double a_s_m = 0.0;     // s-wave scattering length
  double kappa_d = 0.0;   // intra-interferometer EM term (dimensionless)
  Scheme scheme = Scheme::OneOpen;
  fock::PhaseConfig phases{M_PI / 2.0, 0.0, 0.0, 0.0};
  double loss_L_cm6_s = 0.0;  // 0 = use the species default
  double decay_factor = 10.0;
  spheroid::QuadratureSpec quad;

  void validate() const;
  double loss_L() const;
  std::uint64_t atoms_int() const;
};

struct CouplingSet {
  double lp_cross = 0.0;  // lambda'_{cross}, J (negative, attractive)
  double lp_self = 0.0;   // lambda'_{self}, J (negative)
  double kp_self = 0.0;   // kappa'_{self}, J
  double kp_intra = 0.0;  // kappa'_d, J
  // Dimensionless 2 * coupling * t / hbar, signs carried through.
  double lambda = 0.0;
  double lambda_s = 0.0;
  double kappa_s = 0.0;
  double kappa_d = 0.0;
  double gamma = 0.0;  // lambda_s + kappa_s - kappa_d
};

CouplingSet dimensionless_couplings(const ExperimentConfig& cfg);

double squeezing_gain(double squeeze_db);

double number_density_cm3(double atoms, const spheroid::SpheroidGeometry& geom);

// Closed form t = (f^2 - 1) / (2 L n0^2) from dn/dt = -L n^3.
double three_body_lifetime(double n0_cm3, double loss_L_cm6_s,
                           double decay_factor);

// Orders of magnitude by which a_s must drop below the Bohr radius before the
// electromagnetic coupling stays under threshold * |lambda'_{cross}|.
double scattering_suppression(const ExperimentConfig& cfg, double threshold);

struct EffectiveSnr {
  analytic::SnrReport base;  // unsqueezed, at M_eff = reps * setups
  CouplingSet couplings;
  double gain = 1.0;
  double snr = 0.0;  // base.snr * gain
  bool perturbative_ok = true;
  double density_cm3 = 0.0;
  double lifetime_s = 0.0;
};

EffectiveSnr effective_snr(const ExperimentConfig& cfg);

// The unsqueezed order-10^16-atom reference configuration (touching erbium
// spheres at 1e12 cm^-3, t = 1e4 s, 1e3 repetitions, 10 setups).
ExperimentConfig headline_example();

// Two erbium unit spheres (a = c = 1 cm) at separation d.
ExperimentConfig sphere_example(double d);

// End-to-end evaluation of a configuration with every intermediate quantity
// (couplings, density, lifetime, SNR, ratio to 1) printed.
std::string headline_report(const ExperimentConfig& cfg);

}  // namespace gie::experiment
