#pragma once

#include <string>

#include <json.hpp>

#include "corrard/pipeline.hpp"

namespace corrard {

/// Model document fields:
///   format ("corrard-model"), version (1), algorithm, feature_names,
///   weights (raw units), intercept (raw units), weights_standardized,
///   active_indices, relevance, bandwidth (null for LSR-ARD),
///   noise_variance (null for MCR-ARD), n_iters, converged,
///   n_hessian_safeguards, objective_trace,
///   standardization {enabled, means, scales}, target_offset, fit_intercept.
/// Doubles round-trip exactly, so a reloaded model predicts bit-identically.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& doc);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace corrard
