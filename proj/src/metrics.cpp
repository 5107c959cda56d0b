#include "corrard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "corrard/errors.hpp"

namespace corrard {

namespace {

void require_same_length(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("vectors have lengths " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  if (a.size() == 0) throw DimensionMismatch("vectors are empty");
}

// Sum of squared deviations, or 0 when the spread is indistinguishable from
// rounding noise around the mean.
double centered_ss(const Eigen::ArrayXd& centered, double max_abs) {
  const double ss = centered.square().sum();
  const double noise = 1e-14 * max_abs;
  return ss <= static_cast<double>(centered.size()) * noise * noise ? 0.0 : ss;
}

}  // namespace

std::optional<double> try_correlation(const DenseVector& pred,
                                      const DenseVector& truth) {
  require_same_length(pred, truth);
  const Eigen::ArrayXd p = pred.array() - pred.mean();
  const Eigen::ArrayXd t = truth.array() - truth.mean();
  const double ss_p = centered_ss(p, pred.cwiseAbs().maxCoeff());
  const double ss_t = centered_ss(t, truth.cwiseAbs().maxCoeff());
  if (ss_p == 0.0 || ss_t == 0.0) return std::nullopt;
  const double r = (p * t).sum() / std::sqrt(ss_p * ss_t);
  return std::clamp(r, -1.0, 1.0);
}

double correlation(const DenseVector& pred, const DenseVector& truth) {
  auto r = try_correlation(pred, truth);
  if (!r) throw UndefinedCorrelation("correlation undefined: zero variance input");
  return *r;
}

double rmse(const DenseVector& pred, const DenseVector& truth) {
  require_same_length(pred, truth);
  return std::sqrt((pred - truth).squaredNorm() /
                   static_cast<double>(pred.size()));
}

double selection_recall(const std::vector<Eigen::Index>& selected,
                        const std::vector<Eigen::Index>& relevant) {
  const std::set<Eigen::Index> rel(relevant.begin(), relevant.end());
  if (rel.empty()) throw EmptyRelevantSet("relevant set is empty");
  const std::set<Eigen::Index> sel(selected.begin(), selected.end());
  std::size_t hits = 0;
  for (auto i : sel) hits += rel.count(i);
  return static_cast<double>(hits) / static_cast<double>(rel.size());
}

DenseVector source_contribution(const DenseVector& weights, Eigen::Index n_sources,
                                Eigen::Index n_lags) {
  if (n_sources < 1 || n_lags < 1 || weights.size() != n_sources * n_lags) {
    throw DimensionMismatch("weights length " + std::to_string(weights.size()) +
                            " != sources * lags");
  }
  DenseVector contr(n_sources);
  for (Eigen::Index s = 0; s < n_sources; ++s) {
    contr[s] = weights.segment(s * n_lags, n_lags).cwiseAbs().sum();
  }
  const double total = contr.sum();
  if (!(total > 0.0)) throw AllZeroWeights("all weights are zero");
  return contr / total;
}

std::vector<Eigen::Index> top_k_sources(const DenseVector& contribution,
                                        Eigen::Index k) {
  if (k < 0 || k > contribution.size()) {
    throw KTooLarge("k = " + std::to_string(k) + " exceeds " +
                    std::to_string(contribution.size()) + " sources");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(contribution.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return contribution[a] > contribution[b];
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

}  // namespace corrard
