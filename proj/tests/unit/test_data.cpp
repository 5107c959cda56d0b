#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "corrard/data.hpp"
#include "corrard/errors.hpp"
#include "support/oracles.hpp"

using namespace corrard;

namespace {

Dataset make(const DenseMatrix& X) {
  Dataset d;
  d.X = X;
  d.t = DenseVector::Zero(X.rows());
  return d;
}

}  // namespace

TEST_CASE("standardize a single column") {
  DenseMatrix X(3, 1);
  X << 1, 2, 3;
  auto [out, params] = standardize(make(X));
  CHECK(params.means[0] == doctest::Approx(2.0));
  CHECK(params.scales[0] == doctest::Approx(1.0));
  CHECK(out.X(0, 0) == doctest::Approx(-1.0));
  CHECK(out.X(1, 0) == doctest::Approx(0.0));
  CHECK(out.X(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("constant columns are centered with unit scale") {
  DenseMatrix X(3, 1);
  X << 5, 5, 5;
  auto [out, params] = standardize(make(X));
  CHECK(params.scales[0] == 1.0);
  CHECK(out.X.isZero());
}

TEST_CASE("3x2 fixture against hand-computed moments") {
  DenseMatrix X(3, 2);
  X << 1, 10,
       4, 20,
       7, 60;
  // column 0: mean 4, sample sd 3; column 1: mean 30, sample sd sqrt(700)
  auto [out, params] = standardize(make(X));
  CHECK(params.means[0] == doctest::Approx(4.0));
  CHECK(params.means[1] == doctest::Approx(30.0));
  CHECK(params.scales[0] == doctest::Approx(3.0));
  CHECK(params.scales[1] == doctest::Approx(std::sqrt(700.0)));
  CHECK(out.X(0, 0) == doctest::Approx(-1.0));
  CHECK(out.X(2, 1) == doctest::Approx(30.0 / std::sqrt(700.0)));
}

TEST_CASE("standardized columns have mean 0 and sd 1; re-applying is stable") {
  std::mt19937_64 rng(1);
  DenseMatrix X = oracle::random_matrix(40, 6, rng) * 3.0;
  X.col(2).array() += 100.0;
  auto [out, params] = standardize(make(X));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = out.X.col(j).mean();
    const double sd =
        std::sqrt((out.X.col(j).array() - mean).square().sum() / (X.rows() - 1.0));
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(sd - 1.0) < 1e-10);
  }
  CHECK((params.apply(X) - out.X).cwiseAbs().maxCoeff() < 1e-10);
  auto [again, params2] = standardize(out);
  CHECK((again.X - out.X).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("standardize needs two samples") {
  CHECK_THROWS_AS(standardize(make(DenseMatrix::Ones(1, 3))), EmptyDataset);
}

TEST_CASE("lagged design: single source, two lags") {
  DenseMatrix series(5, 1);
  series << 1, 2, 3, 4, 5;
  DenseVector target(5);
  target << 10, 20, 30, 40, 50;
  const Dataset d = build_lagged_design(series, target, {2, 1});
  REQUIRE(d.n_samples() == 4);
  REQUIRE(d.n_features() == 2);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(d.X(i, 0) == static_cast<double>(i + 1));
    CHECK(d.X(i, 1) == static_cast<double>(i + 2));
    CHECK(d.t[i] == target[i + 1]);
  }
  CHECK(d.feature_names == std::vector<std::string>{"src0_lag1", "src0_lag0"});
}

TEST_CASE("lagged design: two sources with 21 lags give 42 columns") {
  DenseMatrix series = DenseMatrix::Random(100, 2);
  const Dataset d = build_lagged_design(series, DenseVector::Zero(100), {});
  CHECK(d.n_features() == 42);
  CHECK(d.n_samples() == 100 - 21 + 1);
}

TEST_CASE("lagged design matches an index-arithmetic oracle") {
  const Eigen::Index T = 30, S = 3;
  const int L = 3;
  for (int stride : {1, 2}) {
    DenseMatrix series(T, S);
    for (Eigen::Index t = 0; t < T; ++t)
      for (Eigen::Index s = 0; s < S; ++s) series(t, s) = 1000.0 * s + t;
    DenseVector target = DenseVector::LinSpaced(T, -1.0, -30.0);
    const LagSpec spec{L, stride};
    const Dataset d = build_lagged_design(series, target, spec);
    const Eigen::Index rows = T - L * stride + stride;
    REQUIRE(d.n_samples() == rows);
    REQUIRE(d.n_features() == S * L);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Eigen::Index now = i + (L - 1) * stride;
      CHECK(d.t[i] == target[now]);
      for (Eigen::Index s = 0; s < S; ++s) {
        for (int lag = 0; lag < L; ++lag) {
          // column for (source s, lag) sits at s * L + (L - 1 - lag)
          CHECK(d.X(i, s * L + (L - 1 - lag)) == 1000.0 * s + (now - lag * stride));
        }
      }
    }
    CHECK(d.feature_names[static_cast<std::size_t>(S * L - 1)] == "src2_lag0");
    CHECK(d.feature_names[3] == "src1_lag2");
  }
}

TEST_CASE("lagged design never reads the target into covariates") {
  std::mt19937_64 rng(4);
  const DenseMatrix series = oracle::random_matrix(50, 2, rng);
  DenseVector target = oracle::random_vector(50, rng);
  const Dataset a = build_lagged_design(series, target, {5, 1});
  std::shuffle(target.begin(), target.end(), rng);
  const Dataset b = build_lagged_design(series, target, {5, 1});
  CHECK(a.X == b.X);
}

TEST_CASE("lagged design errors") {
  CHECK_THROWS_AS(build_lagged_design(DenseMatrix::Ones(5, 1), DenseVector::Ones(5), {5, 1}),
                  SeriesTooShort);
  CHECK_THROWS_AS(build_lagged_design(DenseMatrix::Ones(9, 1), DenseVector::Ones(9), {3, 3}),
                  SeriesTooShort);
  CHECK_THROWS_AS(build_lagged_design(DenseMatrix::Ones(9, 1), DenseVector::Ones(8), {2, 1}),
                  DimensionMismatch);
}

TEST_CASE("target normalization") {
  DenseVector t(3);
  t << 0, 5, 10;
  auto [u, s] = normalize_target_01(t);
  CHECK(u[0] == 0.0);
  CHECK(u[1] == doctest::Approx(0.5));
  CHECK(u[2] == 1.0);

  auto [z, zs] = normalize_target_01(DenseVector::Constant(2, 3.0));
  CHECK(z.isZero());
  CHECK(denormalize_target_01(z, zs) == DenseVector::Constant(2, 3.0));
}

TEST_CASE("target normalization round-trips and preserves order") {
  std::mt19937_64 rng(8);
  const DenseVector x = oracle::random_vector(200, rng) * 7.0;
  auto [u, s] = normalize_target_01(x);
  CHECK(u.minCoeff() >= 0.0);
  CHECK(u.maxCoeff() <= 1.0);
  CHECK((denormalize_target_01(u, s) - x).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (x[i] < x[j]) CHECK(u[i] <= u[j]);
}

TEST_CASE("dataset validation") {
  Dataset d = make(DenseMatrix::Ones(3, 2));
  CHECK_NOTHROW(d.validate());
  d.t = DenseVector::Ones(2);
  CHECK_THROWS_AS(d.validate(), DimensionMismatch);
  Dataset e = make(DenseMatrix(0, 2));
  CHECK_THROWS_AS(e.validate(), EmptyDataset);
  Dataset f = make(DenseMatrix::Ones(2, 2));
  f.X(0, 0) = std::nan("");
  CHECK_THROWS_AS(f.validate(), Error);
}
