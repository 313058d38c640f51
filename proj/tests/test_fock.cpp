#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gie/fock.hpp"

using namespace gie::fock;
using complexd = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846;

JointState random_product_state(std::mt19937& rng, int n_atoms) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  return joint_product(coherent_split_state(n_atoms, phase(rng)),
                       coherent_split_state(n_atoms, phase(rng)));
}
}  // namespace

TEST_CASE("beam splitter at N = 1 is the elementary rotation") {
  auto u = beam_splitter_matrix(1, kPi / 4, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u(0, 0) - complexd(r, 0)) < 1e-14);
  CHECK(std::abs(u(0, 1) - complexd(-r, 0)) < 1e-14);
  CHECK(std::abs(u(1, 0) - complexd(r, 0)) < 1e-14);
  CHECK(std::abs(u(1, 1) - complexd(r, 0)) < 1e-14);
}

TEST_CASE("beam splitter is unitary and composes like a one-parameter group") {
  for (int n : {1, 2, 5, 13}) {
    for (double theta : {0.3, -kPi / 4}) {
      auto u = beam_splitter_matrix(n, theta, 0.7);
      CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(n + 1, n + 1))
                .norm() == doctest::Approx(0.0).epsilon(1e-12));
      auto u2 = beam_splitter_matrix(n, 2.0 * theta, 0.7);
      CHECK((u * u - u2).norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("coherent split state equals the beam splitter acting on |N,0>") {
  for (int n : {1, 4, 9}) {
    for (double phi : {0.0, 1.1, -2.4}) {
      auto st = coherent_split_state(n, phi);
      Eigen::VectorXcd start = Eigen::VectorXcd::Zero(n + 1);
      start[0] = 1.0;
      Eigen::VectorXcd split = beam_splitter_matrix(n, kPi / 4, phi) * start;
      CHECK((st.amplitudes - split).norm() ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("recombination conjugates J_z into J_phi") {
  for (int n : {2, 6}) {
    for (double phi : {0.0, 0.9, -1.7}) {
      auto u = beam_splitter_matrix(n, -kPi / 4, phi);
      auto jz = spin_matrix(n, SpinOperatorSpec{Side::AB});
      auto jphi = spin_matrix(
          n, SpinOperatorSpec{Side::AB, SpinOperatorSpec::Axis::PHI, phi});
      CHECK((u.adjoint() * jz * u - jphi).norm() ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("spin matrices satisfy the su(2) algebra") {
  const int n = 7;
  auto jx = spin_matrix(
      n, SpinOperatorSpec{Side::AB, SpinOperatorSpec::Axis::PHI, 0.0});
  auto jy = spin_matrix(
      n, SpinOperatorSpec{Side::AB, SpinOperatorSpec::Axis::PHI, kPi / 2});
  auto jz = spin_matrix(n, SpinOperatorSpec{Side::AB});
  Eigen::MatrixXcd comm = jx * jy - jy * jx;
  CHECK((comm - complexd(0.0, 1.0) * jz).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  Eigen::MatrixXcd casimir = jx * jx + jy * jy + jz * jz;
  const double j = n / 2.0;
  CHECK((casimir - j * (j + 1.0) * Eigen::MatrixXcd::Identity(n + 1, n + 1))
            .norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("interaction evolution preserves the norm") {
  auto st = paper_evolved_state(11, 0.4, -0.2, 0.13, 0.07);
  CHECK(st.amplitudes.squaredNorm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("closing is equivalent to rotating the readout operator") {
  auto st = paper_evolved_state(6, 0.5, 0.1, 0.08, 0.05);
  const double phase = 0.37;
  double s_open = covariance_S(st, phase);
  JointState closed = st;
  close_interferometer(closed, Side::AB, -kPi / 4, phase);
  double s_rotated = covariance_general(
      closed, SpinOperatorSpec{Side::AB}, SpinOperatorSpec{Side::CD});
  CHECK(s_open == doctest::Approx(s_rotated).epsilon(1e-12));
}

TEST_CASE("no interaction means no covariance") {
  for (double gamma : {0.0, 0.2}) {
    auto st = paper_evolved_state(8, 0.3, 0.6, gamma, 0.0);
    CHECK(std::fabs(covariance_S(st, 0.9)) < 1e-12);
    CHECK(purity_ab(st) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("interaction entangles the interferometers") {
  auto st = paper_evolved_state(10, kPi / 2, 0.0, 0.0, 0.2);
  CHECK(purity_ab(st) < 1.0 - 1e-4);
  CHECK(std::fabs(covariance_S(st, 0.0)) > 1e-3);
}

TEST_CASE("joint states require equal atom numbers") {
  CHECK_THROWS_AS(joint_product(coherent_split_state(3, 0.0),
                                coherent_split_state(4, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("the oracle is capped and validates its inputs") {
  CHECK_THROWS_AS(coherent_split_state(kMaxAtoms + 1, 0.0),
                  std::invalid_argument);
  auto st = paper_evolved_state(4, 0.0, 0.0, 0.1, 0.1);
  SpinOperatorSpec a{Side::AB}, b{Side::CD};
  CHECK_THROWS_AS(joint_moment(st, a, 3, b, 0), std::invalid_argument);
  SpinOperatorSpec wrong{Side::CD};
  CHECK_THROWS_AS(joint_moment(st, wrong, 1, b, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimator_variance_S(st, 0.0, 1), std::invalid_argument);
}

TEST_CASE("estimator variance is positive and shrinks like 1/M") {
  auto st = paper_evolved_state(9, 1.2, 0.0, 0.06, 0.04);
  double v10 = estimator_variance_S(st, 0.0, 10);
  double v1000 = estimator_variance_S(st, 0.0, 1000);
  CHECK(v10 > 0.0);
  CHECK(v10 / v1000 == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("classical product mixtures carry no covariance") {
  std::mt19937 rng(7);
  std::vector<std::pair<double, JointState>> ensemble;
  std::uniform_real_distribution<double> wdist(0.1, 1.0);
  double total = 0.0;
  for (int i = 0; i < 5; ++i) {
    double w = wdist(rng);
    total += w;
    ensemble.emplace_back(w, random_product_state(rng, 6));
  }
  for (auto& [w, st] : ensemble) w /= total;
  ensemble.front().first += 1.0 - [&] {
    double s = 0.0;
    for (const auto& [w, st] : ensemble) s += w;
    return s;
  }();
  CHECK(std::fabs(mixture_covariance(ensemble, 0.8)) < 1e-12);
}

TEST_CASE("mixture weights are validated") {
  std::mt19937 rng(3);
  std::vector<std::pair<double, JointState>> ensemble;
  ensemble.emplace_back(0.7, random_product_state(rng, 3));
  CHECK_THROWS_AS(mixture_covariance(ensemble, 0.0), std::invalid_argument);
  ensemble.emplace_back(-0.3, random_product_state(rng, 3));
  CHECK_THROWS_AS(mixture_covariance(ensemble, 0.0), std::invalid_argument);
}
