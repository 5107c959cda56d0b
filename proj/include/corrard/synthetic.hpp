#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "corrard/pipeline.hpp"

namespace corrard {

/// Sparse linear benchmark: standard-normal covariates, the first
/// `n_relevant` true weights standard normal and the rest zero, t = X w.
struct SyntheticSpec {
  Eigen::Index n_train = 300;
  Eigen::Index n_test = 300;
  Eigen::Index dim = 500;
  Eigen::Index n_relevant = 30;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  DenseVector w_true;
  std::vector<Eigen::Index> relevant;
};

/// Draws w_true, then the training rows, then the test rows from one seeded
/// stream. If `fixed_w` is given it replaces the drawn solution.
SyntheticData generate(const SyntheticSpec& spec,
                       const std::optional<DenseVector>& fixed_w = std::nullopt);

/// Draws the sparse true solution alone (used to pin it across repetitions).
DenseVector draw_solution(Eigen::Index dim, Eigen::Index n_relevant,
                          std::uint64_t seed);

/// Zero-mean Laplace(scale) by inverse CDF from one uniform draw.
double sample_laplace(std::mt19937_64& rng, double scale);

struct CorruptionSpec {
  double proportion = 0.0;
  double laplace_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Adds independent Laplace noise to round(proportion * N * D) distinct,
/// uniformly chosen cells of X. Targets are untouched.
Dataset corrupt_covariates(const Dataset& train, const CorruptionSpec& spec);

/// Deterministic seed derived from a master seed and a list of indices.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

struct BenchConfig {
  SyntheticSpec data;  // data.seed is ignored; seeds derive from master_seed
  std::vector<double> proportions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                  0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> scales{0.2, 0.3, 0.5, 0.7, 1.0, 1.2, 1.5};
  std::vector<Algorithm> algorithms{Algorithm::lsr_ard, Algorithm::mcr_ard};
  int reps = 100;
  std::uint64_t master_seed = 1;
  bool fix_solution = false;
  PipelineOptions pipeline;  // algorithm field is overridden per row
  int jobs = 1;
};

/// One (algorithm, corruption cell, repetition) outcome. Missing metrics
/// are nullopt; `error` names the failure when the fit did not produce
/// usable predictions.
struct BenchRow {
  Algorithm algorithm = Algorithm::lsr_ard;
  std::size_t proportion_index = 0;
  std::size_t scale_index = 0;
  double proportion = 0.0;
  double scale = 0.0;
  int rep = 0;
  std::uint64_t data_seed = 0;
  std::uint64_t cell_seed = 0;
  std::optional<double> correlation;
  std::optional<double> rmse;
  std::optional<Eigen::Index> n_selected;
  std::optional<double> recall;
  std::optional<double> selected_h;
  int n_iters = 0;
  double wall_time = 0.0;  // seconds; not part of the deterministic output
  std::string error;
};

struct BenchSummaryRow {
  Algorithm algorithm = Algorithm::lsr_ard;
  double proportion = 0.0;
  double scale = 0.0;
  int n_reps = 0;
  int n_failed = 0;
  double mean_corr = 0.0, sd_corr = 0.0;
  double mean_rmse = 0.0, sd_rmse = 0.0;
  double mean_selected = 0.0, sd_selected = 0.0;
  double mean_recall = 0.0, sd_recall = 0.0;
  double mean_h = 0.0;
};

/// Corruption cells of the sweep as (proportion, scale) pairs. An empty
/// proportion list yields the single clean cell (0, 0).
std::vector<std::pair<double, double>> corruption_cells(const BenchConfig& cfg);

/// Runs one cell of the sweep for every configured algorithm.
std::vector<BenchRow> run_bench_cell(const BenchConfig& cfg, std::size_t proportion_index,
                                     std::size_t scale_index, int rep);

/// Full sweep; rows are ordered by (proportion, scale, rep, algorithm)
/// regardless of how the worker pool scheduled them.
std::vector<BenchRow> run_monte_carlo(const BenchConfig& cfg);

/// Mean and sample standard deviation per (proportion, scale, algorithm),
/// computed over the repetitions whose metric is present.
std::vector<BenchSummaryRow> summarize_bench(const std::vector<BenchRow>& rows);

std::string bench_results_csv(const std::vector<BenchRow>& rows);
std::string bench_summary_csv(const std::vector<BenchSummaryRow>& rows);
std::string bench_timing_csv(const std::vector<BenchRow>& rows);

}  // namespace corrard
