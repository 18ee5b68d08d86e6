#include "divexplore/distributions.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace divexplore;

TEST_CASE("softmax of uniform logits is uniform") {
  Eigen::VectorXd p = softmax(Eigen::VectorXd::Constant(4, 3.7));
  for (int i = 0; i < 4; ++i) CHECK(p(i) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("softmax of [1, 2] matches closed form") {
  Eigen::VectorXd logits(2);
  logits << 1.0, 2.0;
  Eigen::VectorXd p = softmax(logits);
  const double expected1 = 1.0 / (1.0 + std::exp(1.0));
  CHECK(p(0) == doctest::Approx(expected1).epsilon(1e-14));
  CHECK(p(1) == doctest::Approx(1.0 - expected1).epsilon(1e-14));
}

TEST_CASE("softmax is shift invariant and stable for huge logits") {
  Eigen::VectorXd logits(3);
  logits << 1000.0, 1001.0, 999.0;
  Eigen::VectorXd p = softmax(logits);
  Eigen::VectorXd q = softmax(logits.array() - 1000.0);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((p - q).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(p.minCoeff() > 0.0);
}

TEST_CASE("softmax_rows treats each row independently") {
  Eigen::MatrixXd logits(2, 3);
  logits << 0.0, 1.0, 2.0, 5.0, 5.0, 5.0;
  Eigen::MatrixXd p = softmax_rows(logits);
  CHECK((p.row(0).transpose() - softmax(logits.row(0).transpose())).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("softmax rejects empty input") {
  CHECK_THROWS_AS(softmax(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("kl divergence of a distribution with itself is zero") {
  Eigen::VectorXd p(3);
  p << 0.2, 0.3, 0.5;
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
}

TEST_CASE("kl divergence hand example: [0.7, 0.3] vs uniform") {
  Eigen::VectorXd p(2), q(2);
  p << 0.7, 0.3;
  q << 0.5, 0.5;
  const double expected = 0.7 * std::log(1.4) + 0.3 * std::log(0.6);
  CHECK(kl_divergence(p, q) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("kl divergence with a zero in p uses 0*log 0 = 0") {
  Eigen::VectorXd p(2), q(2);
  p << 1.0, 0.0;
  q << 0.5, 0.5;
  CHECK(kl_divergence(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("kl divergence is non-negative on random distributions") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd p(6), q(6);
    for (int i = 0; i < 6; ++i) { p(i) = u(rng); q(i) = u(rng); }
    p /= p.sum();
    q /= q.sum();
    CHECK(kl_divergence(p, q) >= -1e-12);
  }
}

TEST_CASE("kl divergence rejects mismatched sizes") {
  CHECK_THROWS_AS(kl_divergence(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("entropy of uniform over n is log n") {
  Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.25);
  CHECK(entropy(p) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("entropy of a point mass is zero") {
  Eigen::VectorXd p(3);
  p << 0.0, 1.0, 0.0;
  CHECK(entropy(p) == doctest::Approx(0.0));
}

TEST_CASE("mse hand example and symmetry") {
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 2.0;
  b << 0.0, 4.0;
  CHECK(mse(a, b) == doctest::Approx(2.5).epsilon(1e-14));  // (1 + 4) / 2
  CHECK(mse(b, a) == mse(a, b));
  CHECK(mse(a, a) == 0.0);
}

TEST_CASE("matrix mse averages over all entries") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd b = Eigen::MatrixXd::Constant(2, 2, 3.0);
  CHECK(mse(a, b) == doctest::Approx(9.0).epsilon(1e-14));
}
