#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "netduopoly/errors.hpp"
#include "netduopoly/matrix_exp.hpp"

using netduopoly::matrix_exponential;

namespace {

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).norm() / std::max(1e-300, want.norm());
}

// exp(s t) for symmetric s via its eigendecomposition.
Eigen::MatrixXd symmetric_exp(const Eigen::MatrixXd& s, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd e = (eig.eigenvalues() * t).array().exp();
  return eig.eigenvectors() * e.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("exponential of zero is the identity") {
  for (const double t : {0.0, 1.0, 123.0}) {
    const auto e = matrix_exponential(Eigen::MatrixXd::Zero(4, 4), t);
    CHECK(e == Eigen::MatrixXd::Identity(4, 4));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(3, 3);
  CHECK(matrix_exponential(m, 0.0) == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("triangular 2x2 matches the analytic exponential") {
  Eigen::MatrixXd m(2, 2);
  m << -1, 1, 0, 0;
  for (const double t : {0.01, 1.0, 10.0, 40.0}) {
    const double e = std::exp(-t);
    Eigen::MatrixXd want(2, 2);
    want << e, 1.0 - e, 0, 1;
    const auto got = matrix_exponential(m, t);
    CHECK(rel_err(got, want) <= 1e-10);
    CHECK(got(0, 0) == doctest::Approx(e).epsilon(1e-10));
  }
}

TEST_CASE("symmetric unit pair matches the eigendecomposition") {
  Eigen::MatrixXd m(2, 2);
  m << -1, 1, 1, -1;
  for (const double t : {0.1, 0.7, 3.0, 25.0}) {
    const double e = std::exp(-2.0 * t);
    Eigen::MatrixXd want(2, 2);
    want << (1 + e) / 2, (1 - e) / 2, (1 - e) / 2, (1 + e) / 2;
    CHECK(rel_err(matrix_exponential(m, t), want) <= 1e-10);
  }
}

TEST_CASE("random symmetric matrices match the eigendecomposition") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 9;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    const Eigen::MatrixXd s = 0.5 * (a + a.transpose());
    const double t = 0.5 + trial * 0.2;
    CHECK(rel_err(matrix_exponential(s, t), symmetric_exp(s, t)) <= 1e-10);
  }
}

TEST_CASE("semigroup property on random matrices") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> time(0.0, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    m *= (0.5 + 9.5 * std::abs(u(rng))) / m.norm();  // |M|_F <= 10
    const double s = time(rng), t = time(rng);
    const auto whole = matrix_exponential(m, s + t);
    const Eigen::MatrixXd split = matrix_exponential(m, s) * matrix_exponential(m, t);
    CHECK(rel_err(split, whole) <= 1e-8);
  }
}

TEST_CASE("matrix_exponential rejects bad input") {
  using netduopoly::ValidationError;
  CHECK_THROWS_AS(matrix_exponential(Eigen::MatrixXd::Zero(2, 3)), ValidationError);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Zero(2, 2);
  nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exponential(nan), ValidationError);
  CHECK_THROWS_AS(matrix_exponential(Eigen::MatrixXd::Zero(2, 2), -1.0), ValidationError);
}
