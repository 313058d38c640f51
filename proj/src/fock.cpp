#include "gie/fock.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace gie::fock {

namespace {

using complexd = std::complex<double>;

void check_atom_count(int n_atoms) {
  if (n_atoms < 0) throw std::invalid_argument("atom count must be >= 0");
  if (n_atoms > kMaxAtoms)
    throw std::invalid_argument("oracle atom count capped at " +
                                std::to_string(kMaxAtoms));
}

void check_normalized(const JointState& state) {
  double norm2 = state.amplitudes.squaredNorm();
  if (std::fabs(norm2 - 1.0) > 1e-10)
    throw std::invalid_argument("joint state is not normalized");
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double real_or_throw(complexd v, double imag_tol = 1e-10) {
  if (std::fabs(v.imag()) > imag_tol)
    throw std::runtime_error("expectation has imaginary residue " +
                             std::to_string(v.imag()));
  return v.real();
}

}  // namespace

InterferometerState coherent_split_state(int n_atoms, double phi) {
  check_atom_count(n_atoms);
  InterferometerState st;
  st.atom_count = n_atoms;
  st.amplitudes.resize(n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) {
    double mag = std::exp(0.5 * log_binomial(n_atoms, k) -
                          0.5 * n_atoms * std::log(2.0));
    st.amplitudes[k] = mag * std::exp(complexd(0.0, k * phi));
  }
  return st;
}

Eigen::MatrixXcd beam_splitter_matrix(int n_atoms, double theta, double phi) {
  check_atom_count(n_atoms);
  const int dim = n_atoms + 1;
  // Generator A = e^{i phi} L - e^{-i phi} L† with L the fixed-N ladder
  // (L_{k+1,k} = sqrt((N-k)(k+1))); gauge out phi with D = diag(e^{i k phi})
  // so that exp(theta A) = D exp(theta (L - L†)) D†, and diagonalize the
  // Hermitian i(L - L†).
  Eigen::MatrixXd ladder = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < n_atoms; ++k)
    ladder(k + 1, k) = std::sqrt(double(n_atoms - k) * (k + 1));
  Eigen::MatrixXd skew = ladder - ladder.transpose();
  Eigen::MatrixXcd herm = complexd(0.0, 1.0) * skew.cast<complexd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  Eigen::VectorXcd phases(dim);
  for (int j = 0; j < dim; ++j)
    phases[j] = std::exp(complexd(0.0, -theta * solver.eigenvalues()[j]));
  Eigen::MatrixXcd core = solver.eigenvectors() * phases.asDiagonal() *
                          solver.eigenvectors().adjoint();
  Eigen::VectorXcd gauge(dim);
  for (int k = 0; k < dim; ++k) gauge[k] = std::exp(complexd(0.0, k * phi));
  return gauge.asDiagonal() * core * gauge.conjugate().asDiagonal();
}

JointState joint_product(const InterferometerState& ab,
                         const InterferometerState& cd) {
  if (ab.atom_count != cd.atom_count)
    throw std::invalid_argument(
        "both interferometers must hold the same atom count");
  JointState st;
  st.atom_count = ab.atom_count;
  st.amplitudes = ab.amplitudes * cd.amplitudes.transpose();
  return st;
}

JointState paper_evolved_state(int n_atoms, double phi, double phi_prime,
                               double gamma, double lambda) {
  JointState st = joint_product(coherent_split_state(n_atoms, phi),
                                coherent_split_state(n_atoms, phi_prime));
  double absorb = -n_atoms * (gamma + lambda);
  evolve_interaction(st, gamma, lambda, absorb, absorb);
  return st;
}

void evolve_interaction(JointState& state, double gamma, double lambda,
                        double cap_phi, double cap_phi_prime) {
  check_normalized(state);
  const int dim = state.atom_count + 1;
  for (int k = 0; k < dim; ++k)
    for (int kp = 0; kp < dim; ++kp) {
      double phase = k * cap_phi + kp * cap_phi_prime +
                     gamma * (double(k) * k + double(kp) * kp) +
                     2.0 * lambda * double(k) * kp;
      state.amplitudes(k, kp) *= std::exp(complexd(0.0, phase));
    }
}

void close_interferometer(JointState& state, Side side, double theta,
                          double phase) {
  check_normalized(state);
  Eigen::MatrixXcd u = beam_splitter_matrix(state.atom_count, theta, phase);
  if (side == Side::AB)
    state.amplitudes = u * state.amplitudes;
  else
    state.amplitudes = state.amplitudes * u.transpose();
}

Eigen::MatrixXcd spin_matrix(int n_atoms, const SpinOperatorSpec& spec) {
  const int dim = n_atoms + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  if (spec.axis == SpinOperatorSpec::Axis::Z) {
    for (int k = 0; k < dim; ++k) m(k, k) = 0.5 * (n_atoms - 2.0 * k);
  } else {
    // J_phi = (a b† e^{i phi} + a† b e^{-i phi})/2 in the |N-k, k> basis.
    for (int k = 0; k < n_atoms; ++k) {
      double s = 0.5 * std::sqrt(double(n_atoms - k) * (k + 1));
      m(k + 1, k) = s * std::exp(complexd(0.0, spec.phi));
      m(k, k + 1) = s * std::exp(complexd(0.0, -spec.phi));
    }
  }
  return m;
}

double joint_moment(const JointState& state, const SpinOperatorSpec& op_a,
                    int power_a, const SpinOperatorSpec& op_b, int power_b) {
  check_normalized(state);
  if (op_a.side != Side::AB || op_b.side != Side::CD)
    throw std::invalid_argument(
        "joint_moment needs one operator per side (AB first, CD second)");
  if (power_a < 0 || power_a > 2 || power_b < 0 || power_b > 2)
    throw std::invalid_argument("operator powers limited to 0, 1, 2");
  const int dim = state.atom_count + 1;
  Eigen::MatrixXcd left = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd right = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd ma = spin_matrix(state.atom_count, op_a);
  Eigen::MatrixXcd mb = spin_matrix(state.atom_count, op_b);
  for (int i = 0; i < power_a; ++i) left = left * ma;
  for (int i = 0; i < power_b; ++i) right = right * mb;
  Eigen::MatrixXcd x = left * state.amplitudes * right.transpose();
  complexd val = (state.amplitudes.conjugate().cwiseProduct(x)).sum();
  return real_or_throw(val);
}

namespace {

struct MomentTable {
  double m[3][3];
};

MomentTable moment_table(const JointState& state, const SpinOperatorSpec& op_a,
                         const SpinOperatorSpec& op_b) {
  MomentTable t;
  for (int pa = 0; pa <= 2; ++pa)
    for (int pb = 0; pb <= 2; ++pb)
      t.m[pa][pb] = joint_moment(state, op_a, pa, op_b, pb);
  return t;
}

double variance_from_table(const MomentTable& t, long long reps) {
  if (reps < 2) throw std::invalid_argument("repetitions must be >= 2");
  const double a = t.m[1][0], b = t.m[0][1];
  const double k20 = t.m[2][0] - a * a;
  const double k02 = t.m[0][2] - b * b;
  const double s = t.m[1][1] - a * b;
  const double k22 = t.m[2][2] - 2.0 * t.m[2][1] * b - 2.0 * t.m[1][2] * a -
                     t.m[2][0] * t.m[0][2] + 2.0 * t.m[2][0] * b * b +
                     2.0 * a * a * t.m[0][2] + 8.0 * t.m[1][1] * a * b -
                     6.0 * a * a * b * b - 2.0 * t.m[1][1] * t.m[1][1];
  return (k22 + k20 * k02 + s * s) / double(reps);
}

}  // namespace

double covariance_general(const JointState& state, const SpinOperatorSpec& op_a,
                          const SpinOperatorSpec& op_b) {
  return joint_moment(state, op_a, 1, op_b, 1) -
         joint_moment(state, op_a, 1, op_b, 0) *
             joint_moment(state, op_a, 0, op_b, 1);
}

double covariance_S(const JointState& state, double close_phase) {
  SpinOperatorSpec op_a{Side::AB, SpinOperatorSpec::Axis::PHI, close_phase};
  SpinOperatorSpec op_b{Side::CD, SpinOperatorSpec::Axis::Z, 0.0};
  return covariance_general(state, op_a, op_b);
}

double estimator_variance_S(const JointState& state, double close_phase,
                            long long reps) {
  SpinOperatorSpec op_a{Side::AB, SpinOperatorSpec::Axis::PHI, close_phase};
  SpinOperatorSpec op_b{Side::CD, SpinOperatorSpec::Axis::Z, 0.0};
  return variance_from_table(moment_table(state, op_a, op_b), reps);
}

double estimator_variance_general(const JointState& state,
                                  const SpinOperatorSpec& op_a,
                                  const SpinOperatorSpec& op_b,
                                  long long reps) {
  return variance_from_table(moment_table(state, op_a, op_b), reps);
}

double purity_ab(const JointState& state) {
  check_normalized(state);
  Eigen::MatrixXcd rho = state.amplitudes * state.amplitudes.adjoint();
  return (rho * rho).trace().real();
}

double mixture_covariance(
    const std::vector<std::pair<double, JointState>>& ensemble,
    double close_phase) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  double wsum = 0.0;
  for (const auto& [w, st] : ensemble) {
    if (w < 0.0) throw std::invalid_argument("mixture weights must be >= 0");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("mixture weights must sum to 1");
  SpinOperatorSpec op_a{Side::AB, SpinOperatorSpec::Axis::PHI, close_phase};
  SpinOperatorSpec op_b{Side::CD, SpinOperatorSpec::Axis::Z, 0.0};
  double m11 = 0.0, m10 = 0.0, m01 = 0.0;
  for (const auto& [w, st] : ensemble) {
    m11 += w * joint_moment(st, op_a, 1, op_b, 1);
    m10 += w * joint_moment(st, op_a, 1, op_b, 0);
    m01 += w * joint_moment(st, op_a, 0, op_b, 1);
  }
  return m11 - m10 * m01;
}

}  // namespace gie::fock
