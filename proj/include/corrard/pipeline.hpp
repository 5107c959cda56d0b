#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrard/bandwidth.hpp"
#include "corrard/lsr_ard.hpp"
#include "corrard/mcr_ard.hpp"

namespace corrard {

/// How MCR-ARD obtains its bandwidth when trained through the pipeline.
struct BandwidthChoice {
  std::optional<double> fixed_h;  // used as-is when set
  BandwidthGrid grid;
  CvLayout cv;
  /// When set, select h on a single seeded split with this many training
  /// samples instead of k-fold CV.
  std::optional<Eigen::Index> holdout_train;
};

struct PipelineOptions {
  Algorithm algorithm = Algorithm::mcr_ard;
  bool standardize = true;
  /// Appends a constant column that is never pruned. Without it the target is
  /// centered instead.
  bool intercept = false;
  LsrArdConfig lsr;
  McrArdConfig mcr;
  BandwidthChoice bandwidth;
  int jobs = 1;
};

/// A fitted model plus everything needed to predict from raw covariates.
struct TrainedModel {
  FittedModel fit;  // weights in standardized space (+ intercept column)
  std::vector<std::string> feature_names;
  bool standardized = false;
  StandardizationParams params;  // identity when !standardized
  double target_offset = 0.0;
  bool intercept = false;
  std::optional<BandwidthSelection> bandwidth_search;

  Eigen::Index n_features() const noexcept {
    return static_cast<Eigen::Index>(params.means.size());
  }

  /// Design matrix seen by the estimator for raw covariates.
  DenseMatrix transform(const DenseMatrix& X_raw) const;

  DenseVector predict(const DenseMatrix& X_raw) const;

  /// Weights expressed on the raw covariate scale.
  DenseVector original_weights() const;

  /// Constant term on the raw scale: prediction = original_intercept() +
  /// X_raw * original_weights().
  double original_intercept() const;

  /// Active covariate indices (intercept column excluded).
  std::vector<Eigen::Index> selected_features() const;
};

/// Training data as the estimator sees it, plus the transform that produced
/// it (the model's fit is left empty).
struct PreparedData {
  Dataset data;
  TrainedModel model;
  std::vector<bool> protected_mask;  // marks the intercept column, if any
};

/// Standardizes (optional), then appends the intercept column or centers the
/// target.
PreparedData prepare_training_data(const Dataset& raw, const PipelineOptions& opts);

/// Bandwidth search on prepared data: k-fold CV, or the holdout split when
/// opts.bandwidth.holdout_train is set. Ignores fixed_h.
BandwidthSelection search_bandwidth(const PreparedData& prepared,
                                    const PipelineOptions& opts);

/// Standardizes (optional), centers or augments, picks h when needed and
/// fits the requested estimator.
TrainedModel train_model(const Dataset& raw, const PipelineOptions& opts);

}  // namespace corrard
