#include <doctest.h>

#include <random>

#include "corrard/errors.hpp"
#include "corrard/linalg.hpp"
#include "support/oracles.hpp"

using namespace corrard;

TEST_CASE("spd_solve on identity and diagonal systems") {
  DenseVector b(3);
  b << 1, 2, 3;
  CHECK(spd_solve(DenseMatrix::Identity(3, 3), b) == b);

  DenseMatrix d = DenseVector((DenseVector(2) << 2, 4).finished()).asDiagonal();
  const DenseVector x = spd_solve(d, (DenseVector(2) << 2, 8).finished());
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
}

TEST_CASE("spd_solve matches the elimination oracle") {
  std::mt19937_64 rng(7);
  const DenseMatrix m = oracle::random_spd(5, 1.0, rng);
  const DenseVector b = oracle::random_vector(5, rng);
  const DenseVector x = spd_solve(m, b);
  const DenseVector ref = oracle::solve(m, b);
  CHECK((m * x - b).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + b.cwiseAbs().maxCoeff()));
  CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spd_solve residual bound over random G^T G + lambda I") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 1 + trial % 12;
    const double lambda = 1e-3 * (1 + trial);
    const DenseMatrix m = oracle::random_spd(n, lambda, rng);
    const DenseVector b = oracle::random_vector(n, rng);
    const DenseVector x = spd_solve(m, b);
    CHECK((m * x - b).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + b.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("spd_inverse_diagonal small cases") {
  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 4;
  const DenseVector s = spd_inverse_diagonal(d);
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(0.25));
  CHECK(spd_inverse_diagonal(DenseMatrix::Identity(6, 6)).isOnes());
}

TEST_CASE("spd_inverse_diagonal matches the full-inverse oracle") {
  std::mt19937_64 rng(3);
  const DenseMatrix m = oracle::random_spd(4, 0.5, rng);
  const DenseVector s = spd_inverse_diagonal(m);
  const DenseMatrix inv = oracle::inverse(m);
  for (Eigen::Index d = 0; d < 4; ++d) {
    CHECK(s[d] > 0.0);
    CHECK(s[d] == doctest::Approx(inv(d, d)).epsilon(1e-10));
  }
}

TEST_CASE("inverse diagonal agrees with unit-vector solves") {
  std::mt19937_64 rng(5);
  const DenseMatrix m = oracle::random_spd(9, 0.1, rng);
  const DenseVector s = spd_inverse_diagonal(m);
  for (Eigen::Index d = 0; d < 9; ++d) {
    const DenseVector e = DenseVector::Unit(9, d);
    CHECK(std::abs(s[d] - spd_solve(m, e)[d]) <= 1e-8);
  }
}

TEST_CASE("deterministic output") {
  std::mt19937_64 rng(9);
  const DenseMatrix m = oracle::random_spd(30, 1.0, rng);
  const DenseVector b = oracle::random_vector(30, rng);
  CHECK(spd_solve(m, b) == spd_solve(m, b));
  CHECK(spd_inverse_diagonal(m) == spd_inverse_diagonal(m));
}

TEST_CASE("non-SPD and malformed inputs") {
  DenseMatrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(spd_solve(indefinite, DenseVector::Ones(2)), NotSPD);
  CHECK_THROWS_AS(spd_inverse_diagonal(indefinite), NotSPD);

  DenseMatrix tiny_pivot = DenseMatrix::Identity(2, 2);
  tiny_pivot(1, 1) = 1e-14;
  CHECK_THROWS_AS(spd_solve(tiny_pivot, DenseVector::Ones(2)), NotSPD);

  DenseMatrix asym(2, 2);
  asym << 2, 1, 0, 2;
  CHECK_THROWS_AS(spd_solve(asym, DenseVector::Ones(2)), DimensionMismatch);
  CHECK_THROWS_AS(spd_solve(DenseMatrix::Identity(3, 3), DenseVector::Ones(2)),
                  DimensionMismatch);
  CHECK_THROWS_AS(spd_solve(DenseMatrix::Ones(2, 3), DenseVector::Ones(2)),
                  DimensionMismatch);
}
