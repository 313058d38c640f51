#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace gie::fock {

// Exact two-interferometer simulation in the fixed-N subspace. Each
// interferometer holds exactly N atoms in two modes; the joint state is the
// (N+1)x(N+1) amplitude grid over occupation pairs (k, k'), where k counts
// atoms in the second mode. Ground truth for the closed-form engine; capped
// at small N.
inline constexpr int kMaxAtoms = 64;

struct InterferometerState {
  int atom_count = 0;
  Eigen::VectorXcd amplitudes;  // index k = 0..N, amplitude of |N-k, k>
};

struct JointState {
  int atom_count = 0;
  Eigen::MatrixXcd amplitudes;  // (k, k'), k rows = ab side, k' cols = cd side
};

enum class Side { AB, CD };

struct SpinOperatorSpec {
  Side side = Side::AB;
  enum class Axis { Z, PHI } axis = Axis::Z;
  double phi = 0.0;  // used when axis == PHI; PHI(0) is x, PHI(pi/2) is y
};

// All interferometer phases in radians. phi/phi_prime are the initial
// beam-splitter phases, close/close_prime the recombination phases.
struct PhaseConfig {
  double phi = 0.0;
  double phi_prime = 0.0;
  double close = 0.0;
  double close_prime = 0.0;

  double delta_open() const { return phi - close; }       // signal phase, ab
  double mu() const { return close - phi; }               // closed scheme, ab
  double nu() const { return close_prime - phi_prime; }   // closed scheme, cd
  double delta_single() const { return nu(); }            // isolated cd fringe
};

InterferometerState coherent_split_state(int n_atoms, double phi);

// U(theta, phi) = exp[theta (e^{i phi} a b† - e^{-i phi} a† b)] restricted to
// the N-atom subspace. theta = pi/4 reproduces coherent_split_state from
// |N, 0>; recombination uses U(-pi/4, phase).
Eigen::MatrixXcd beam_splitter_matrix(int n_atoms, double theta, double phi);

JointState joint_product(const InterferometerState& ab,
                         const InterferometerState& cd);

// Coherent split states evolved per the interaction Hamiltonian with the
// linear phase absorption Phi = phi - N(gamma + lambda) already applied, so
// downstream phases compare directly against the closed forms.
JointState paper_evolved_state(int n_atoms, double phi, double phi_prime,
                               double gamma, double lambda);

// Multiplies amplitude_{k,k'} by e^{i(k Phi + k' Phi')} e^{i gamma (k^2+k'^2)}
// e^{2 i lambda k k'}.
void evolve_interaction(JointState& state, double gamma, double lambda,
                        double cap_phi, double cap_phi_prime);

void close_interferometer(JointState& state, Side side, double theta,
                          double phase);

Eigen::MatrixXcd spin_matrix(int n_atoms, const SpinOperatorSpec& spec);

// <(J_A)^powerA (J_B)^powerB> with opA on side AB and opB on side CD.
double joint_moment(const JointState& state, const SpinOperatorSpec& op_a,
                    int power_a, const SpinOperatorSpec& op_b, int power_b);

// S = <J_phi^{ab} J_z^{cd}> - <J_phi^{ab}><J_z^{cd}> (ab closed at the given
// phase, cd left open).
double covariance_S(const JointState& state, double close_phase);

// Var(S) of the sample-covariance estimator over reps shots:
// (kappa22 + kappa20 kappa02 + S^2)/reps from exact joint moments.
double estimator_variance_S(const JointState& state, double close_phase,
                            long long reps);

// Same estimator with arbitrary commuting readout operators on each side
// (used for the both-closed scheme).
double estimator_variance_general(const JointState& state,
                                  const SpinOperatorSpec& op_a,
                                  const SpinOperatorSpec& op_b, long long reps);

double covariance_general(const JointState& state, const SpinOperatorSpec& op_a,
                          const SpinOperatorSpec& op_b);

double purity_ab(const JointState& state);

// Covariance of a classical mixture of product states; weights must sum to 1.
double mixture_covariance(
    const std::vector<std::pair<double, JointState>>& ensemble,
    double close_phase);

}  // namespace gie::fock
