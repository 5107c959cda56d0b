#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "corrard/errors.hpp"
#include "corrard/linalg.hpp"

namespace corrard {

enum class Algorithm { lsr_ard, mcr_ard };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& name);  // "lsr-ard" / "mcr-ard"

/// Result of an ARD fit. Weights live in the space of the covariates the
/// estimator was given (standardized space when used through the pipeline).
struct FittedModel {
  Algorithm algorithm = Algorithm::mcr_ard;
  DenseVector weights;            // zeros at pruned indices
  std::vector<bool> active_mask;  // false once a feature is pruned
  DenseVector relevance;          // a_d; value at pruning time for pruned d
  std::optional<double> noise_variance;  // LSR-ARD only
  std::optional<double> bandwidth;       // MCR-ARD only
  int n_iters = 0;
  bool converged = false;
  int n_hessian_safeguards = 0;  // MCR-ARD: iterations that clamped the Hessian
  std::vector<double> objective_trace;

  Eigen::Index n_features() const noexcept { return weights.size(); }
  std::vector<Eigen::Index> active_indices() const;
  Eigen::Index n_active() const;
};

/// Raised when every feature has been pruned. The partially fitted model
/// (all-zero weights, empty active set) is kept for reporting.
class AllFeaturesPruned : public Error {
 public:
  explicit AllFeaturesPruned(FittedModel model)
      : Error("all features were pruned"), model_(std::move(model)) {}
  const FittedModel& model() const noexcept { return model_; }

 private:
  FittedModel model_;
};

/// Per-iteration hook: iteration index (0-based), full-length weights after
/// pruning, full-length relevance values.
using IterationObserver =
    std::function<void(int, const DenseVector&, const DenseVector&)>;

/// Relevance update shared by both estimators. Uses the fast form
/// (1 - a_prev * s2) / w^2 when it is positive and w^2 >= 1e-24, otherwise
/// 1 / (w^2 + s2). Every entry of the result is positive.
DenseVector a_step(const DenseVector& w_star, const DenseVector& s2,
                   const DenseVector& a_prev);

/// X * weights.
DenseVector predict(const FittedModel& model, const DenseMatrix& X);

namespace detail {

DenseMatrix gather_columns(const DenseMatrix& X,
                           const std::vector<Eigen::Index>& cols);

/// spd_solve with one retry after adding 1e-10 * trace / D to the diagonal.
DenseVector solve_with_jitter(DenseMatrix m, const DenseVector& b);

/// SpdFactor with the same single jitter retry.
SpdFactor factor_with_jitter(DenseMatrix m);

}  // namespace detail

}  // namespace corrard
