#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrard/data.hpp"
#include "corrard/mcr_ard.hpp"

namespace corrard {

/// Log-spaced bandwidth candidates lo * (hi/lo)^(i/(n-1)).
struct BandwidthGrid {
  double lo = 1.0;
  double hi = 1000.0;
  int n_points = 30;
};

/// Throws BadGrid unless 0 < lo < hi and n_points >= 2. A single-point grid
/// (n_points == 1) is accepted when lo == hi.
DenseVector grid_points(const BandwidthGrid& grid);

enum class SelectionMetric { correlation, rmse };

struct CvLayout {
  int n_folds = 5;
  std::uint64_t seed = 0;
  SelectionMetric metric = SelectionMetric::correlation;
};

/// Seeded shuffle of 0..n-1 cut into n_folds contiguous, near-equal folds.
std::vector<std::vector<Eigen::Index>> fold_partition(Eigen::Index n, int n_folds,
                                                      std::uint64_t seed);

struct CvRow {
  double h = 0.0;
  double mean_corr = 0.0;  // -inf if any fold failed
  double sd_corr = 0.0;    // sample sd across folds; NaN if any fold failed
  double mean_rmse = 0.0;
  double sd_rmse = 0.0;
  int n_failed = 0;
};

struct BandwidthSelection {
  double h_best = 0.0;
  std::vector<CvRow> table;
};

/// h of the best row (highest mean correlation or lowest mean RMSE); rows
/// within 1e-12 of the best count as tied and the largest tied h wins.
double best_bandwidth(const std::vector<CvRow>& table, SelectionMetric metric);

/// k-fold cross-validated choice of h for MCR-ARD. Fits on k-1 folds, scores
/// the held-out fold, and returns the h with the best mean score; ties within
/// 1e-12 go to the largest h. A fold whose fit fails (or whose prediction is
/// constant) scores -inf correlation and +inf RMSE.
BandwidthSelection select_bandwidth(const Dataset& data, const BandwidthGrid& grid,
                                    const CvLayout& cv, const McrArdConfig& cfg,
                                    int jobs = 1);

/// Single train/validation split variant: a seeded subset of `n_train`
/// samples trains, the rest validates. sd columns are zero.
BandwidthSelection select_bandwidth_holdout(const Dataset& data,
                                            const BandwidthGrid& grid,
                                            Eigen::Index n_train,
                                            std::uint64_t seed,
                                            SelectionMetric metric,
                                            const McrArdConfig& cfg, int jobs = 1);

/// CSV with columns h,mean_corr,sd_corr,mean_rmse,sd_rmse.
std::string cv_table_csv(const std::vector<CvRow>& table);

}  // namespace corrard
