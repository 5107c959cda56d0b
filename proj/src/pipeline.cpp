#include "corrard/pipeline.hpp"

namespace corrard {

DenseMatrix TrainedModel::transform(const DenseMatrix& X_raw) const {
  if (X_raw.cols() != n_features()) {
    throw DimensionMismatch("model expects " + std::to_string(n_features()) +
                            " covariates, got " + std::to_string(X_raw.cols()));
  }
  DenseMatrix Z = standardized ? params.apply(X_raw) : X_raw;
  if (intercept) {
    Z.conservativeResize(Eigen::NoChange, Z.cols() + 1);
    Z.col(Z.cols() - 1).setOnes();
  }
  return Z;
}

DenseVector TrainedModel::predict(const DenseMatrix& X_raw) const {
  DenseVector out = corrard::predict(fit, transform(X_raw));
  out.array() += target_offset;
  return out;
}

DenseVector TrainedModel::original_weights() const {
  const DenseVector w = fit.weights.head(n_features());
  return standardized ? DenseVector(w.cwiseQuotient(params.scales)) : w;
}

double TrainedModel::original_intercept() const {
  double c = target_offset;
  if (intercept) c += fit.weights[n_features()];
  if (standardized) c -= original_weights().dot(params.means);
  return c;
}

std::vector<Eigen::Index> TrainedModel::selected_features() const {
  std::vector<Eigen::Index> out;
  for (auto d : fit.active_indices()) {
    if (d < n_features()) out.push_back(d);
  }
  return out;
}

PreparedData prepare_training_data(const Dataset& raw, const PipelineOptions& opts) {
  raw.validate();
  PreparedData out;
  TrainedModel& model = out.model;
  model.feature_names = raw.feature_names;
  model.intercept = opts.intercept;
  model.standardized = opts.standardize;

  Dataset& data = out.data;
  if (opts.standardize) {
    auto [std_data, params] = standardize(raw);
    data = std::move(std_data);
    model.params = std::move(params);
  } else {
    data = raw;
    model.params.means = DenseVector::Zero(raw.n_features());
    model.params.scales = DenseVector::Ones(raw.n_features());
  }

  if (opts.intercept) {
    data.X.conservativeResize(Eigen::NoChange, data.X.cols() + 1);
    data.X.col(data.X.cols() - 1).setOnes();
    if (!data.feature_names.empty()) data.feature_names.push_back("(intercept)");
    out.protected_mask.assign(static_cast<std::size_t>(data.X.cols()), false);
    out.protected_mask.back() = true;
  } else {
    model.target_offset = data.t.mean();
    data.t.array() -= model.target_offset;
  }
  return out;
}

BandwidthSelection search_bandwidth(const PreparedData& prepared,
                                    const PipelineOptions& opts) {
  McrArdConfig cfg = opts.mcr;
  cfg.protected_mask = prepared.protected_mask;
  const BandwidthChoice& bw = opts.bandwidth;
  if (bw.holdout_train) {
    return select_bandwidth_holdout(prepared.data, bw.grid, *bw.holdout_train,
                                    bw.cv.seed, bw.cv.metric, cfg, opts.jobs);
  }
  return select_bandwidth(prepared.data, bw.grid, bw.cv, cfg, opts.jobs);
}

TrainedModel train_model(const Dataset& raw, const PipelineOptions& opts) {
  PreparedData prepared = prepare_training_data(raw, opts);
  TrainedModel model = std::move(prepared.model);
  const Dataset& data = prepared.data;

  if (opts.algorithm == Algorithm::lsr_ard) {
    LsrArdConfig cfg = opts.lsr;
    cfg.protected_mask = prepared.protected_mask;
    model.fit = fit_lsr_ard(data, cfg);
    return model;
  }

  McrArdConfig cfg = opts.mcr;
  cfg.protected_mask = prepared.protected_mask;
  if (opts.bandwidth.fixed_h) {
    cfg.bandwidth = *opts.bandwidth.fixed_h;
  } else {
    model.bandwidth_search = search_bandwidth(prepared, opts);
    cfg.bandwidth = model.bandwidth_search->h_best;
  }
  model.fit = fit_mcr_ard(data, cfg);
  return model;
}

}  // namespace corrard
