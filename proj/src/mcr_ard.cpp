#include "corrard/mcr_ard.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace corrard {

namespace {

void require_bandwidth(double h) {
  if (!(h > 0.0)) {
    throw NonPositiveBandwidth("kernel bandwidth must be > 0, got " +
                               std::to_string(h));
  }
}

DenseVector residuals(const DenseMatrix& X, const DenseVector& t,
                      const DenseVector& w) {
  if (X.cols() != w.size() || X.rows() != t.size()) {
    throw DimensionMismatch("X, t and w have inconsistent shapes");
  }
  return t - X * w;
}

// X^T diag(c) X
DenseMatrix weighted_gram(const DenseMatrix& X, const DenseVector& c) {
  const DenseMatrix weighted = X.array().colwise() * c.array();
  return X.transpose() * weighted;
}

}  // namespace

void McrArdConfig::validate() const {
  require_bandwidth(bandwidth);
  if (!(prune_threshold > 0.0)) throw BadConfig("prune threshold must be > 0");
  if (max_outer_iters < 1 || max_fp_iters < 1) {
    throw BadConfig("iteration limits must be >= 1");
  }
  if (!(fp_tol > 0.0) || !(w_tol > 0.0)) {
    throw BadConfig("tolerances must be > 0");
  }
}

double correntropy_log_density(double eps, double h) {
  require_bandwidth(h);
  return std::exp(-eps * eps / (2.0 * h));
}

DenseVector psi_weights(const DenseVector& eps, double h) {
  require_bandwidth(h);
  return (-eps.array().square() / (2.0 * h)).exp().matrix();
}

double penalized_correntropy(const DenseMatrix& X, const DenseVector& t,
                             const DenseVector& w, const DenseVector& a_mean,
                             double h) {
  const DenseVector psi = psi_weights(residuals(X, t, w), h);
  return psi.sum() - 0.5 * (a_mean.array() * w.array().square()).sum();
}

DenseVector penalized_correntropy_gradient(const DenseMatrix& X,
                                           const DenseVector& t,
                                           const DenseVector& w,
                                           const DenseVector& a_mean,
                                           double h) {
  const DenseVector eps = residuals(X, t, w);
  const DenseVector psi = psi_weights(eps, h);
  return X.transpose() * psi.cwiseProduct(eps) / h -
         a_mean.cwiseProduct(w);
}

DenseVector w_step(const DenseMatrix& X, const DenseVector& t,
                   const DenseVector& a_mean, double h,
                   const DenseVector& w_init, const McrArdConfig& cfg) {
  require_bandwidth(h);
  if (a_mean.size() != X.cols() || w_init.size() != X.cols()) {
    throw DimensionMismatch("w_step: a_mean / w_init do not match X columns");
  }
  if ((a_mean.array() < 0.0).any()) throw BadConfig("a_mean must be >= 0");

  DenseVector w = w_init;
  for (int pass = 0; pass < cfg.max_fp_iters; ++pass) {
    const DenseVector psi = psi_weights(residuals(X, t, w), h);
    DenseMatrix system = weighted_gram(X, psi);
    system.diagonal() += h * a_mean;
    const DenseVector rhs = X.transpose() * psi.cwiseProduct(t);
    DenseVector next = detail::solve_with_jitter(std::move(system), rhs);
    const double change = (next - w).cwiseAbs().maxCoeff();
    w = std::move(next);
    if (change < cfg.fp_tol) break;
  }
  return w;
}

DenseMatrix exact_negative_hessian(const DenseMatrix& X, const DenseVector& t,
                                   const DenseVector& w,
                                   const DenseVector& a_mean, double h) {
  require_bandwidth(h);
  const DenseVector eps = residuals(X, t, w);
  const DenseVector psi = psi_weights(eps, h);
  // psi_n (1 - eps_n^2 / h) / h, the per-sample curvature weight.
  const DenseVector c =
      (psi.array() * (1.0 - eps.array().square() / h) / h).matrix();
  DenseMatrix H = weighted_gram(X, c);
  H.diagonal() += a_mean;
  return H;
}

namespace {

struct HessianFactor {
  DenseMatrix H;
  std::optional<SpdFactor> factor;
  bool safeguarded = false;
};

// Builds the negative Hessian for `mode`. In exact mode the SPD check's
// factorization is kept so callers do not factor twice.
HessianFactor build_negative_hessian(const DenseMatrix& X, const DenseVector& t,
                                     const DenseVector& w, const DenseVector& a_mean,
                                     double h, HessianMode mode) {
  require_bandwidth(h);
  const DenseVector eps = residuals(X, t, w);
  const DenseVector psi = psi_weights(eps, h);
  HessianFactor out;
  if (mode == HessianMode::gauss_style_psd) {
    out.H = weighted_gram(X, psi / h);
    out.H.diagonal() += a_mean;
    return out;
  }
  out.H = exact_negative_hessian(X, t, w, a_mean, h);
  try {
    out.factor.emplace(out.H);
    return out;
  } catch (const NotSPD&) {
  }
  out.safeguarded = true;
  const DenseVector c =
      (psi.array() * (1.0 - eps.array().square() / h).max(0.0) / h).matrix();
  out.H = weighted_gram(X, c);
  out.H.diagonal() += a_mean;
  return out;
}

}  // namespace

DenseMatrix negative_hessian(const DenseMatrix& X, const DenseVector& t,
                             const DenseVector& w, const DenseVector& a_mean,
                             double h, HessianMode mode, bool* safeguarded) {
  HessianFactor hf = build_negative_hessian(X, t, w, a_mean, h, mode);
  if (safeguarded) *safeguarded = hf.safeguarded;
  return std::move(hf.H);
}

DenseVector laplace_moments(const DenseMatrix& H) {
  return spd_inverse_diagonal(H);
}

VariationalState init_mcr_state(const Dataset& data, const McrArdConfig& cfg) {
  data.validate();
  cfg.validate();
  const Eigen::Index dim = data.n_features();
  if (data.n_samples() < 2) throw EmptyDataset("MCR-ARD needs at least two samples");
  if (!cfg.protected_mask.empty() &&
      static_cast<Eigen::Index>(cfg.protected_mask.size()) != dim) {
    throw DimensionMismatch("protected_mask length does not match features");
  }

  VariationalState state;
  state.active.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index d = 0; d < dim; ++d) state.active[static_cast<std::size_t>(d)] = d;
  state.active_mask.assign(static_cast<std::size_t>(dim), true);
  state.a_mean = DenseVector::Ones(dim);
  state.relevance = DenseVector::Ones(dim);
  DenseMatrix system = data.X.transpose() * data.X;
  system.diagonal().array() += cfg.bandwidth;
  state.w = detail::solve_with_jitter(std::move(system),
                                      data.X.transpose() * data.t);
  state.psi = DenseVector::Ones(data.n_samples());
  state.s2 = DenseVector::Zero(dim);
  return state;
}

OuterIteration mcr_outer_iteration(const Dataset& data, VariationalState& state,
                                   const McrArdConfig& cfg) {
  const double h = cfg.bandwidth;
  const DenseMatrix x_act = detail::gather_columns(data.X, state.active);

  OuterIteration out;
  const DenseVector w = w_step(x_act, data.t, state.a_mean, h, state.w, cfg);
  out.objective = penalized_correntropy(x_act, data.t, w, state.a_mean, h);

  HessianFactor hf =
      build_negative_hessian(x_act, data.t, w, state.a_mean, h, cfg.hessian_mode);
  out.safeguarded = hf.safeguarded;
  const DenseVector s2 = hf.factor ? hf.factor->inverse_diagonal()
                                   : detail::factor_with_jitter(std::move(hf.H))
                                         .inverse_diagonal();
  const DenseVector a_new =
      cfg.update_relevance ? a_step(w, s2, state.a_mean) : state.a_mean;

  state.psi = psi_weights(data.t - x_act * w, h);
  out.w_full = DenseVector::Zero(data.n_features());

  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> kept_pos;
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    const Eigen::Index d = state.active[i];
    const auto pos = static_cast<Eigen::Index>(i);
    const bool is_protected =
        !cfg.protected_mask.empty() && cfg.protected_mask[static_cast<std::size_t>(d)];
    if (a_new[pos] >= cfg.prune_threshold && !is_protected) {
      state.active_mask[static_cast<std::size_t>(d)] = false;
      ++out.n_pruned;
    } else {
      out.w_full[d] = w[pos];
      kept.push_back(d);
      kept_pos.push_back(pos);
    }
  }

  const auto k = static_cast<Eigen::Index>(kept.size());
  DenseVector w_kept(k), a_kept(k), s2_kept(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index pos = kept_pos[static_cast<std::size_t>(i)];
    w_kept[i] = w[pos];
    a_kept[i] = a_new[pos];
    s2_kept[i] = s2[pos];
  }
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    state.relevance[state.active[i]] = a_new[static_cast<Eigen::Index>(i)];
  }
  state.active = std::move(kept);
  state.w = std::move(w_kept);
  state.a_mean = std::move(a_kept);
  state.s2 = std::move(s2_kept);
  return out;
}

FittedModel fit_mcr_ard(const Dataset& data, const McrArdConfig& cfg) {
  VariationalState state = init_mcr_state(data, cfg);

  FittedModel model;
  model.algorithm = Algorithm::mcr_ard;
  model.bandwidth = cfg.bandwidth;
  model.weights = state.w;
  model.active_mask = state.active_mask;
  model.relevance = state.relevance;

  for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
    OuterIteration step = mcr_outer_iteration(data, state, cfg);
    const double delta = (step.w_full - model.weights).cwiseAbs().maxCoeff();
    model.weights = std::move(step.w_full);
    model.active_mask = state.active_mask;
    model.relevance = state.relevance;
    model.objective_trace.push_back(step.objective);
    model.n_iters = iter + 1;
    if (step.safeguarded) ++model.n_hessian_safeguards;
    if (cfg.observer) cfg.observer(iter, model.weights, model.relevance);

    if (state.active.empty()) throw AllFeaturesPruned(std::move(model));
    if (iter > 0 && delta < cfg.w_tol) {
      model.converged = true;
      break;
    }
  }
  return model;
}

}  // namespace corrard
