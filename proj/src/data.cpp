#include "corrard/data.hpp"

#include <cmath>
#include <string>

#include "corrard/errors.hpp"

namespace corrard {

void Dataset::validate() const {
  if (X.rows() == 0 || X.cols() == 0) {
    throw EmptyDataset("dataset needs at least one sample and one feature");
  }
  if (X.rows() != t.size()) {
    throw DimensionMismatch("X has " + std::to_string(X.rows()) +
                            " rows but t has " + std::to_string(t.size()) +
                            " entries");
  }
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != X.cols()) {
    throw DimensionMismatch("feature_names length does not match X columns");
  }
  if (!X.allFinite() || !t.allFinite()) {
    throw Error("dataset has non-finite entries");
  }
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.t.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(r);
    out.t[static_cast<Eigen::Index>(i)] = t[r];
  }
  out.feature_names = feature_names;
  return out;
}

DenseMatrix StandardizationParams::apply(const DenseMatrix& X) const {
  if (X.cols() != means.size()) {
    throw DimensionMismatch("standardization expects " +
                            std::to_string(means.size()) + " columns, got " +
                            std::to_string(X.cols()));
  }
  return (X.rowwise() - means.transpose()).array().rowwise() /
         scales.transpose().array();
}

std::pair<Dataset, StandardizationParams> standardize(const Dataset& train) {
  if (train.X.rows() < 2 || train.X.cols() == 0) {
    throw EmptyDataset("standardization needs at least two samples");
  }
  const auto n = static_cast<double>(train.X.rows());
  StandardizationParams params;
  params.means = train.X.colwise().mean().transpose();
  params.scales.resize(train.X.cols());
  for (Eigen::Index j = 0; j < train.X.cols(); ++j) {
    const double ss =
        (train.X.col(j).array() - params.means[j]).square().sum();
    const double sd = std::sqrt(ss / (n - 1.0));
    params.scales[j] = sd > 0.0 ? sd : 1.0;
  }
  Dataset out = train;
  out.X = params.apply(train.X);
  return {std::move(out), std::move(params)};
}

Eigen::Index lagged_row_count(Eigen::Index length, const LagSpec& spec) {
  return length - static_cast<Eigen::Index>(spec.n_lags) * spec.stride +
         spec.stride;
}

Eigen::Index lagged_target_time(Eigen::Index row, const LagSpec& spec) {
  return row + static_cast<Eigen::Index>(spec.n_lags - 1) * spec.stride;
}

std::string lagged_column_name(Eigen::Index source, int lag) {
  return "src" + std::to_string(source) + "_lag" + std::to_string(lag);
}

Dataset build_lagged_design(const DenseMatrix& series, const DenseVector& target,
                            const LagSpec& spec) {
  if (spec.n_lags < 1 || spec.stride < 1) {
    throw BadConfig("n_lags and stride must be at least 1");
  }
  const Eigen::Index length = series.rows();
  const Eigen::Index n_sources = series.cols();
  if (target.size() != length) {
    throw DimensionMismatch("series has " + std::to_string(length) +
                            " samples but target has " +
                            std::to_string(target.size()));
  }
  if (n_sources == 0) throw EmptyDataset("no source series");
  if (length <= static_cast<Eigen::Index>(spec.n_lags) * spec.stride) {
    throw SeriesTooShort("series of length " + std::to_string(length) +
                         " is too short for " + std::to_string(spec.n_lags) +
                         " lags with stride " + std::to_string(spec.stride));
  }

  const Eigen::Index rows = lagged_row_count(length, spec);
  Dataset out;
  out.X.resize(rows, n_sources * spec.n_lags);
  out.t.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index now = lagged_target_time(i, spec);
    out.t[i] = target[now];
    for (Eigen::Index s = 0; s < n_sources; ++s) {
      for (int l = 0; l < spec.n_lags; ++l) {
        const Eigen::Index time =
            now - static_cast<Eigen::Index>(spec.n_lags - 1 - l) * spec.stride;
        out.X(i, s * spec.n_lags + l) = series(time, s);
      }
    }
  }
  out.feature_names.reserve(static_cast<std::size_t>(out.X.cols()));
  for (Eigen::Index s = 0; s < n_sources; ++s) {
    for (int p = 0; p < spec.n_lags; ++p) {
      out.feature_names.push_back(lagged_column_name(s, spec.n_lags - 1 - p));
    }
  }
  return out;
}

std::pair<DenseVector, TargetScaling> normalize_target_01(const DenseVector& t) {
  if (t.size() == 0) throw EmptyDataset("cannot normalize an empty target");
  TargetScaling s{t.minCoeff(), t.maxCoeff()};
  if (s.max == s.min) return {DenseVector::Zero(t.size()), s};
  const double range = s.max - s.min;
  DenseVector u = ((t.array() - s.min) / range).cwiseMax(0.0).cwiseMin(1.0);
  return {std::move(u), s};
}

DenseVector denormalize_target_01(const DenseVector& u, const TargetScaling& s) {
  if (s.max == s.min) return DenseVector::Constant(u.size(), s.min);
  return (u.array() * (s.max - s.min) + s.min).matrix();
}

}  // namespace corrard
