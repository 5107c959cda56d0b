#include "corrard/lsr_ard.hpp"

#include <algorithm>
#include <cmath>

namespace corrard {

void LsrArdConfig::validate() const {
  if (!(prune_threshold > 0.0)) throw BadConfig("prune threshold must be > 0");
  if (max_iters < 1) throw BadConfig("max_iters must be >= 1");
  if (!(w_tol > 0.0)) throw BadConfig("w_tol must be > 0");
  if (!(sigma2_floor > 0.0)) throw BadConfig("sigma2_floor must be > 0");
  if (fixed_noise_variance && !(*fixed_noise_variance > 0.0)) {
    throw BadConfig("fixed noise variance must be > 0");
  }
}

FittedModel fit_lsr_ard(const Dataset& data, const LsrArdConfig& cfg) {
  data.validate();
  cfg.validate();
  const Eigen::Index n = data.n_samples();
  const Eigen::Index dim = data.n_features();
  if (n < 2) throw EmptyDataset("LSR-ARD needs at least two samples");
  if (!cfg.protected_mask.empty() &&
      static_cast<Eigen::Index>(cfg.protected_mask.size()) != dim) {
    throw DimensionMismatch("protected_mask length does not match features");
  }

  const DenseMatrix gram = data.X.transpose() * data.X;
  const DenseVector xt = data.X.transpose() * data.t;
  const auto n_real = static_cast<double>(n);

  double sigma2;
  if (cfg.fixed_noise_variance) {
    sigma2 = *cfg.fixed_noise_variance;
  } else {
    const double var_t = (data.t.array() - data.t.mean()).square().sum() / n_real;
    sigma2 = std::max(0.1 * var_t, cfg.sigma2_floor);
  }

  FittedModel model;
  model.algorithm = Algorithm::lsr_ard;
  model.active_mask.assign(static_cast<std::size_t>(dim), true);
  model.relevance = DenseVector::Ones(dim);
  model.weights = DenseVector::Zero(dim);

  std::vector<Eigen::Index> active(static_cast<std::size_t>(dim));
  for (Eigen::Index d = 0; d < dim; ++d) active[static_cast<std::size_t>(d)] = d;

  // Ridge start: one posterior solve with A = I.
  {
    DenseMatrix precision = gram / sigma2;
    precision.diagonal().array() += 1.0;
    model.weights = detail::solve_with_jitter(std::move(precision), xt / sigma2);
  }

  DenseVector a_act = DenseVector::Ones(dim);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const auto k = static_cast<Eigen::Index>(active.size());
    DenseMatrix precision(k, k);
    DenseVector rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      rhs[i] = xt[active[static_cast<std::size_t>(i)]] / sigma2;
      for (Eigen::Index j = 0; j < k; ++j) {
        precision(i, j) = gram(active[static_cast<std::size_t>(i)],
                               active[static_cast<std::size_t>(j)]) / sigma2;
      }
    }
    precision.diagonal() += a_act;
    const SpdFactor factor = detail::factor_with_jitter(std::move(precision));
    const DenseVector w = factor.solve(rhs);
    const DenseVector sigma_diag = factor.inverse_diagonal();

    const DenseMatrix x_act = detail::gather_columns(data.X, active);
    const double rss = (data.t - x_act * w).squaredNorm();
    model.objective_trace.push_back(-0.5 * rss / sigma2 -
                                    0.5 * (a_act.array() * w.array().square()).sum());

    const DenseVector gamma =
        (1.0 - a_act.array() * sigma_diag.array()).matrix();
    const DenseVector a_new = a_step(w, sigma_diag, a_act);

    if (!cfg.fixed_noise_variance) {
      const double dof = std::max(n_real - gamma.sum(), 1e-12);
      sigma2 = std::max(rss / dof, cfg.sigma2_floor);
    }

    DenseVector w_full = DenseVector::Zero(dim);
    std::vector<Eigen::Index> kept;
    std::vector<double> kept_a;
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::Index d = active[static_cast<std::size_t>(i)];
      model.relevance[d] = a_new[i];
      const bool is_protected =
          !cfg.protected_mask.empty() && cfg.protected_mask[static_cast<std::size_t>(d)];
      if (a_new[i] >= cfg.prune_threshold && !is_protected) {
        model.active_mask[static_cast<std::size_t>(d)] = false;
      } else {
        w_full[d] = w[i];
        kept.push_back(d);
        kept_a.push_back(a_new[i]);
      }
    }

    const double delta = (w_full - model.weights).cwiseAbs().maxCoeff();
    model.weights = std::move(w_full);
    model.n_iters = iter + 1;
    model.noise_variance = sigma2;
    if (cfg.observer) cfg.observer(iter, model.weights, model.relevance);

    if (kept.empty()) throw AllFeaturesPruned(std::move(model));
    active = std::move(kept);
    a_act = Eigen::Map<const DenseVector>(kept_a.data(),
                                          static_cast<Eigen::Index>(kept_a.size()));
    if (iter > 0 && delta < cfg.w_tol) {
      model.converged = true;
      break;
    }
  }
  return model;
}

}  // namespace corrard
