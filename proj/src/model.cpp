#include "corrard/model.hpp"

#include <string>

namespace corrard {

namespace {
constexpr double kTinyWeightSq = 1e-24;
constexpr double kJitterScale = 1e-10;
}  // namespace

std::string to_string(Algorithm algo) {
  return algo == Algorithm::lsr_ard ? "lsr-ard" : "mcr-ard";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "lsr-ard") return Algorithm::lsr_ard;
  if (name == "mcr-ard") return Algorithm::mcr_ard;
  throw BadConfig("unknown algorithm '" + name +
                  "' (expected lsr-ard or mcr-ard)");
}

std::vector<Eigen::Index> FittedModel::active_indices() const {
  std::vector<Eigen::Index> out;
  for (std::size_t d = 0; d < active_mask.size(); ++d) {
    if (active_mask[d]) out.push_back(static_cast<Eigen::Index>(d));
  }
  return out;
}

Eigen::Index FittedModel::n_active() const {
  Eigen::Index n = 0;
  for (bool b : active_mask) n += b ? 1 : 0;
  return n;
}

DenseVector a_step(const DenseVector& w_star, const DenseVector& s2,
                   const DenseVector& a_prev) {
  if (w_star.size() != s2.size() || w_star.size() != a_prev.size()) {
    throw DimensionMismatch("a_step inputs differ in length");
  }
  DenseVector a(w_star.size());
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    const double w2 = w_star[d] * w_star[d];
    const double gamma = 1.0 - a_prev[d] * s2[d];
    if (gamma > 0.0 && w2 >= kTinyWeightSq) {
      a[d] = gamma / w2;
    } else {
      a[d] = 1.0 / (w2 + s2[d]);
    }
  }
  return a;
}

DenseVector predict(const FittedModel& model, const DenseMatrix& X) {
  if (X.cols() != model.weights.size()) {
    throw DimensionMismatch("model has " +
                            std::to_string(model.weights.size()) +
                            " features, input has " + std::to_string(X.cols()));
  }
  return X * model.weights;
}

namespace detail {

DenseMatrix gather_columns(const DenseMatrix& X,
                           const std::vector<Eigen::Index>& cols) {
  DenseMatrix out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  }
  return out;
}

DenseVector solve_with_jitter(DenseMatrix m, const DenseVector& b) {
  return factor_with_jitter(std::move(m)).solve(b);
}

SpdFactor factor_with_jitter(DenseMatrix m) {
  try {
    return SpdFactor(m);
  } catch (const NotSPD&) {
    const double jitter =
        kJitterScale * m.trace() / static_cast<double>(m.rows());
    m.diagonal().array() += jitter;
    return SpdFactor(m);
  }
}

}  // namespace detail

}  // namespace corrard
