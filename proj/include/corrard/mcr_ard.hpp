#pragma once

#include <limits>
#include <vector>

#include "corrard/data.hpp"
#include "corrard/model.hpp"

namespace corrard {

enum class HessianMode {
  /// Exact negative Hessian of log q_w; samples whose bracket
  /// (eps^2 / h - 1) is positive are dropped if the exact matrix is not SPD.
  exact_with_safeguard,
  /// (1/h) X^T Psi X + diag(a), always SPD.
  gauss_style_psd,
};

struct McrArdConfig {
  double bandwidth = 1.0;  // h
  double prune_threshold = 1e6;
  int max_outer_iters = 500;
  int max_fp_iters = 50;
  double fp_tol = 1e-6;
  double w_tol = 1e-6;
  HessianMode hessian_mode = HessianMode::exact_with_safeguard;
  /// When false the relevances stay at their initial value of 1.
  bool update_relevance = true;
  std::vector<bool> protected_mask;
  IterationObserver observer;

  void validate() const;
};

/// Mean-field state over the currently active features.
struct VariationalState {
  std::vector<Eigen::Index> active;  // indices into the full feature set
  std::vector<bool> active_mask;     // full length
  DenseVector w;                     // active weights
  DenseVector a_mean;                // active relevances
  DenseVector psi;                   // per-sample error weights in (0, 1]
  DenseVector s2;                    // Laplace variances of active weights
  DenseVector relevance;             // full length, last a-step value
};

/// log C(eps | 0, h) = exp(-eps^2 / 2h).
double correntropy_log_density(double eps, double h);

/// Psi_nn = exp(-eps_n^2 / 2h).
DenseVector psi_weights(const DenseVector& eps, double h);

/// J(w) = sum_n exp(-eps_n^2 / 2h) - 1/2 sum_d a_d w_d^2, i.e. log q_w up to
/// a constant.
double penalized_correntropy(const DenseMatrix& X, const DenseVector& t,
                             const DenseVector& w, const DenseVector& a_mean,
                             double h);

/// Gradient of J with respect to w.
DenseVector penalized_correntropy_gradient(const DenseMatrix& X,
                                           const DenseVector& t,
                                           const DenseVector& w,
                                           const DenseVector& a_mean, double h);

/// Maximizes J by the half-quadratic fixed point
///   w <- (X^T Psi X + h diag(a))^{-1} X^T Psi t,
/// recomputing Psi from the current residuals on every pass.
/// `X` holds the active columns only.
DenseVector w_step(const DenseMatrix& X, const DenseVector& t,
                   const DenseVector& a_mean, double h,
                   const DenseVector& w_init, const McrArdConfig& cfg);

/// Negative Hessian of log q_w at w without any safeguard:
///   -(1/h) sum_n x_n^T psi_n (eps_n^2 / h - 1) x_n + diag(a).
DenseMatrix exact_negative_hessian(const DenseMatrix& X, const DenseVector& t,
                                   const DenseVector& w,
                                   const DenseVector& a_mean, double h);

/// Negative Hessian used by the fit: the exact matrix in
/// exact_with_safeguard mode (clamped when it is not SPD), or the
/// Gauss-style surrogate. `safeguarded`, if given, reports whether the clamp
/// fired.
DenseMatrix negative_hessian(const DenseMatrix& X, const DenseVector& t,
                             const DenseVector& w, const DenseVector& a_mean,
                             double h, HessianMode mode,
                             bool* safeguarded = nullptr);

/// Diagonal of H^{-1}.
DenseVector laplace_moments(const DenseMatrix& H);

/// Initial state: every feature active, a = 1, w from the ridge solve with
/// Psi = I.
VariationalState init_mcr_state(const Dataset& data, const McrArdConfig& cfg);

struct OuterIteration {
  DenseVector w_full;       // weights after pruning, full length
  double objective = 0.0;   // J at the w-step result
  bool safeguarded = false;
  Eigen::Index n_pruned = 0;
};

/// One pass of w-step, negative Hessian, Laplace moments, a-step and pruning.
/// Leaves `state.active` empty when every feature was pruned.
OuterIteration mcr_outer_iteration(const Dataset& data, VariationalState& state,
                                   const McrArdConfig& cfg);

/// Robust sparse regression: correntropy likelihood with an ARD prior,
/// optimized by alternating the w-step and a-step until the weights stop
/// moving or the iteration cap is reached.
FittedModel fit_mcr_ard(const Dataset& data, const McrArdConfig& cfg);

}  // namespace corrard
