#pragma once

#include <optional>
#include <vector>

#include "corrard/linalg.hpp"

namespace corrard {

/// Pearson correlation. Throws UndefinedCorrelation when either input has
/// zero variance.
double correlation(const DenseVector& pred, const DenseVector& truth);

/// Same as correlation() but reports the undefined case as nullopt.
std::optional<double> try_correlation(const DenseVector& pred,
                                      const DenseVector& truth);

double rmse(const DenseVector& pred, const DenseVector& truth);

/// |selected ∩ relevant| / |relevant|. Duplicates are ignored.
double selection_recall(const std::vector<Eigen::Index>& selected,
                        const std::vector<Eigen::Index>& relevant);

/// Share of total absolute weight carried by each source of a lagged design
/// (columns ordered source-major, n_lags columns per source).
DenseVector source_contribution(const DenseVector& weights, Eigen::Index n_sources,
                                Eigen::Index n_lags);

/// Indices of the k largest contributions, largest first; ties go to the
/// lower index.
std::vector<Eigen::Index> top_k_sources(const DenseVector& contribution,
                                        Eigen::Index k);

struct MetricsRecord {
  std::optional<double> correlation;
  double rmse = 0.0;
  Eigen::Index n_selected = 0;
  std::optional<double> recall;
  std::optional<DenseVector> contribution;
};

}  // namespace corrard
