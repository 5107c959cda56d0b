#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corrard/linalg.hpp"

namespace corrard {

/// Covariates (one row per sample) and responses.
struct Dataset {
  DenseMatrix X;
  DenseVector t;
  std::vector<std::string> feature_names;  // empty or one per column

  Eigen::Index n_samples() const noexcept { return X.rows(); }
  Eigen::Index n_features() const noexcept { return X.cols(); }

  /// Throws if shapes disagree, the dataset is empty or entries are
  /// non-finite.
  void validate() const;

  /// Rows selected by `rows`, in that order.
  Dataset subset(const std::vector<Eigen::Index>& rows) const;
};

struct StandardizationParams {
  DenseVector means;
  DenseVector scales;  // strictly positive

  /// Applies (x - mean) / scale column-wise.
  DenseMatrix apply(const DenseMatrix& X) const;
};

/// Centers every column and scales non-constant columns to unit (sample,
/// N-1) standard deviation. Constant columns keep scale 1.
std::pair<Dataset, StandardizationParams> standardize(const Dataset& train);

/// Lag window for the decoding design. Lag 0 is the current sample.
struct LagSpec {
  int n_lags = 21;
  int stride = 1;
};

/// Builds a design in which row i uses the `n_lags` most recent samples
/// (current sample included, spaced by `stride`) of every series to predict
/// the target at the row's final time index.
///
/// Columns are source-major and time-ordered inside each source block: column
/// s * n_lags + p holds series s at window position p, oldest first, so the
/// last column of a block is the current sample (lag 0). Column names are
/// `src{s}_lag{n_lags - 1 - p}`. Rows correspond to target times
/// (n_lags - 1) * stride .. T - 1.
Dataset build_lagged_design(const DenseMatrix& series, const DenseVector& target,
                            const LagSpec& spec);

/// Row count produced by build_lagged_design for a series of length T.
Eigen::Index lagged_row_count(Eigen::Index length, const LagSpec& spec);

/// Target time index (0-based) that design row `row` predicts.
Eigen::Index lagged_target_time(Eigen::Index row, const LagSpec& spec);

std::string lagged_column_name(Eigen::Index source, int lag);

struct TargetScaling {
  double min = 0.0;
  double max = 0.0;
};

/// Affine map onto [0, 1]. A constant vector maps to zeros.
std::pair<DenseVector, TargetScaling> normalize_target_01(const DenseVector& t);

DenseVector denormalize_target_01(const DenseVector& u, const TargetScaling& s);

}  // namespace corrard
