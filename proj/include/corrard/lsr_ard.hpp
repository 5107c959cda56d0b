#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "corrard/data.hpp"
#include "corrard/model.hpp"

namespace corrard {

struct LsrArdConfig {
  double prune_threshold = 1e6;  // a_max
  int max_iters = 500;
  double w_tol = 1e-6;
  double sigma2_floor = 1e-12;
  /// Pins sigma^2 instead of re-estimating it each iteration.
  std::optional<double> fixed_noise_variance;
  /// Features that are never pruned (e.g. an appended intercept column).
  std::vector<bool> protected_mask;
  IterationObserver observer;

  void validate() const;
};

/// Gaussian-likelihood sparse Bayesian regression with an ARD prior.
///
/// Each iteration computes the Gaussian posterior of the active weights,
/// updates the relevances with the same rule as MCR-ARD, re-estimates the
/// noise variance from the effective degrees of freedom, and prunes every
/// feature whose relevance reaches the threshold.
FittedModel fit_lsr_ard(const Dataset& data, const LsrArdConfig& cfg = {});

}  // namespace corrard
