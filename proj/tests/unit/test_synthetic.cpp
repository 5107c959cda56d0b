#include <doctest.h>

#include <cmath>
#include <random>

#include "corrard/synthetic.hpp"

using namespace corrard;

namespace {

BenchConfig small_bench() {
  BenchConfig cfg;
  cfg.data = SyntheticSpec{60, 60, 20, 4, 0};
  cfg.proportions = {0.0, 0.3};
  cfg.scales = {1.0};
  cfg.reps = 2;
  cfg.master_seed = 5;
  cfg.pipeline.bandwidth.fixed_h = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("generated shapes and sparsity") {
  const SyntheticData s = generate(SyntheticSpec{});
  CHECK(s.train.X.rows() == 300);
  CHECK(s.train.X.cols() == 500);
  CHECK(s.test.X.rows() == 300);
  CHECK(s.test.X.cols() == 500);
  CHECK((s.w_true.array() != 0.0).count() == 30);
  CHECK(s.w_true.tail(470).isZero());
  CHECK(s.relevant.size() == 30);
  CHECK(s.relevant.front() == 0);
  CHECK(s.relevant.back() == 29);
  CHECK((s.train.t - s.train.X * s.w_true).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s.test.t - s.test.X * s.w_true).cwiseAbs().maxCoeff() == 0.0);
  // Covariates look standard normal.
  const double mean = s.train.X.mean();
  const double var = (s.train.X.array() - mean).square().mean();
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("no relevant features gives a zero target") {
  const SyntheticData s = generate(SyntheticSpec{20, 10, 8, 0, 3});
  CHECK(s.train.t.isZero());
  CHECK(s.test.t.isZero());
  CHECK(s.relevant.empty());
}

TEST_CASE("generation is deterministic per seed") {
  const SyntheticSpec spec{50, 40, 30, 5, 77};
  const SyntheticData a = generate(spec);
  const SyntheticData b = generate(spec);
  CHECK(a.train.X == b.train.X);
  CHECK(a.test.X == b.test.X);
  CHECK(a.w_true == b.w_true);
  SyntheticSpec other = spec;
  other.seed = 78;
  CHECK(generate(other).train.X != a.train.X);

  const DenseVector w = draw_solution(30, 5, 9);
  const SyntheticData pinned = generate(spec, w);
  CHECK(pinned.w_true == w);
  CHECK(pinned.train.t == pinned.train.X * w);
  CHECK_THROWS_AS(generate(SyntheticSpec{10, 10, 5, 6, 0}), BadConfig);
}

TEST_CASE("corruption touches exactly the requested cells") {
  const SyntheticData s = generate(SyntheticSpec{300, 10, 500, 30, 1});
  CHECK(corrupt_covariates(s.train, {0.0, 1.0, 4}).X == s.train.X);
  for (double p : {0.1, 0.25, 0.7}) {
    const Dataset c = corrupt_covariates(s.train, {p, 0.5, 4});
    const auto changed = (c.X.array() != s.train.X.array()).count();
    CHECK(changed == std::llround(p * 300 * 500));
    CHECK(c.t == s.train.t);
  }
  const Dataset a = corrupt_covariates(s.train, {0.2, 1.0, 8});
  const Dataset b = corrupt_covariates(s.train, {0.2, 1.0, 8});
  CHECK(a.X == b.X);
  CHECK_THROWS_AS(corrupt_covariates(s.train, {1.5, 1.0, 1}), BadConfig);
  CHECK_THROWS_AS(corrupt_covariates(s.train, {0.5, 0.0, 1}), BadConfig);
}

TEST_CASE("full corruption has Laplace mean absolute perturbation") {
  const SyntheticData s = generate(SyntheticSpec{300, 10, 500, 30, 2});
  for (double b : {0.2, 1.0, 1.5}) {
    const Dataset c = corrupt_covariates(s.train, {1.0, b, 6});
    const double mad = (c.X - s.train.X).cwiseAbs().mean();
    CHECK(std::abs(mad - b) < 0.05 * b);
  }
}

TEST_CASE("Laplace sampler variance") {
  std::mt19937_64 rng(123);
  for (double b : {0.3, 1.0, 2.0}) {
    double sum = 0.0, sum2 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double x = sample_laplace(rng, b);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(var - 2.0 * b * b) < 0.02 * 2.0 * b * b);
    CHECK(std::abs(mean) < 0.01 * b);
  }
}

TEST_CASE("derived seeds") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  CHECK(derive_seed(1, {}) != derive_seed(1, {0}));
}

TEST_CASE("empty corruption grid yields one clean cell per algorithm") {
  BenchConfig cfg = small_bench();
  cfg.proportions.clear();
  cfg.scales.clear();
  cfg.reps = 1;
  const auto rows = run_monte_carlo(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].algorithm == Algorithm::lsr_ard);
  CHECK(rows[1].algorithm == Algorithm::mcr_ard);
  for (const auto& r : rows) {
    CHECK(r.proportion == 0.0);
    CHECK(r.error.empty());
    CHECK(*r.correlation > 0.99);
  }
  CHECK(summarize_bench(rows).size() == 2);

  // Scales are ignored when there is no proportion to pair them with.
  cfg.scales = {0.2, 0.5, 1.0};
  const auto with_scales = run_monte_carlo(cfg);
  REQUIRE(with_scales.size() == 2);
  CHECK(with_scales[0].scale == 0.0);
  CHECK(bench_results_csv(with_scales) == bench_results_csv(rows));
}

TEST_CASE("sweep is ordered, complete and reproducible") {
  BenchConfig cfg = small_bench();
  const auto a = run_monte_carlo(cfg);
  REQUIRE(a.size() == 2 * 1 * 2 * 2);
  CHECK(a[0].proportion == 0.0);
  CHECK(a[0].rep == 0);
  CHECK(a[2].rep == 1);
  CHECK(a[4].proportion == 0.3);
  for (const auto& r : a) {
    if (r.recall) CHECK((*r.recall >= 0.0 && *r.recall <= 1.0));
    if (r.n_selected) CHECK((*r.n_selected >= 0 && *r.n_selected <= 20));
  }
  // Same clean draw for every corruption cell of a repetition.
  CHECK(a[0].data_seed == a[4].data_seed);
  CHECK(a[0].cell_seed != a[4].cell_seed);

  cfg.jobs = 3;
  const auto b = run_monte_carlo(cfg);
  CHECK(bench_results_csv(a) == bench_results_csv(b));
  CHECK(bench_summary_csv(summarize_bench(a)) == bench_summary_csv(summarize_bench(b)));

  const auto cell = run_bench_cell(cfg, 1, 0, 1);
  REQUIRE(cell.size() == 2);
  CHECK(bench_results_csv(cell) == bench_results_csv({a[6], a[7]}));
}

TEST_CASE("summary statistics") {
  BenchRow r1, r2, r3;
  r1.correlation = 0.5; r1.rmse = 1.0; r1.n_selected = 10; r1.recall = 1.0;
  r2.correlation = 0.7; r2.rmse = 3.0; r2.n_selected = 20; r2.recall = 0.5;
  r3.error = "AllFeaturesPruned"; r3.n_selected = 0; r3.recall = 0.0;
  r1.rep = 0; r2.rep = 1; r3.rep = 2;
  const auto s = summarize_bench({r1, r2, r3});
  REQUIRE(s.size() == 1);
  CHECK(s[0].n_reps == 3);
  CHECK(s[0].n_failed == 1);
  CHECK(s[0].mean_corr == doctest::Approx(0.6));
  CHECK(s[0].sd_corr == doctest::Approx(std::sqrt(0.02)));
  CHECK(s[0].mean_rmse == doctest::Approx(2.0));
  CHECK(s[0].mean_selected == doctest::Approx(10.0));
  CHECK(s[0].sd_selected == doctest::Approx(10.0));
  CHECK(s[0].mean_recall == doctest::Approx(0.5));
}

TEST_CASE("results CSV layout") {
  const auto rows = run_monte_carlo([] {
    BenchConfig c = small_bench();
    c.proportions = {0.0};
    c.reps = 1;
    return c;
  }());
  const std::string csv = bench_results_csv(rows);
  CHECK(csv.rfind("algorithm,proportion,scale,rep,data_seed,cell_seed,correlation,rmse,"
                  "n_selected,recall,selected_h,n_iters,error\n", 0) == 0);
  CHECK(bench_timing_csv(rows).find("wall_time") != std::string::npos);
  CHECK(csv.find("wall_time") == std::string::npos);
}
