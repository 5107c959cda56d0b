#include "corrard/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "corrard/csv.hpp"
#include "corrard/metrics.hpp"
#include "corrard/parallel.hpp"

namespace corrard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

struct FoldScore {
  double corr = -kInf;
  double rmse = kInf;
  bool failed = true;
};

FoldScore score_fit(const Dataset& train, const Dataset& valid,
                    const McrArdConfig& cfg) {
  FoldScore s;
  try {
    const FittedModel model = fit_mcr_ard(train, cfg);
    const DenseVector pred = predict(model, valid.X);
    s.rmse = rmse(pred, valid.t);
    if (auto r = try_correlation(pred, valid.t)) {
      s.corr = *r;
      s.failed = false;
    }
  } catch (const Error&) {
  }
  return s;
}

CvRow summarize(double h, const std::vector<FoldScore>& scores) {
  CvRow row;
  row.h = h;
  const auto k = static_cast<double>(scores.size());
  for (const auto& s : scores) row.n_failed += s.failed ? 1 : 0;
  if (row.n_failed > 0) {
    row.mean_corr = -kInf;
    row.sd_corr = std::numeric_limits<double>::quiet_NaN();
  } else {
    double sum = 0.0;
    for (const auto& s : scores) sum += s.corr;
    row.mean_corr = sum / k;
    double ss = 0.0;
    for (const auto& s : scores) ss += (s.corr - row.mean_corr) * (s.corr - row.mean_corr);
    row.sd_corr = scores.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
  }
  bool rmse_finite = true;
  double sum = 0.0;
  for (const auto& s : scores) {
    rmse_finite = rmse_finite && std::isfinite(s.rmse);
    sum += s.rmse;
  }
  if (!rmse_finite) {
    row.mean_rmse = kInf;
    row.sd_rmse = std::numeric_limits<double>::quiet_NaN();
  } else {
    row.mean_rmse = sum / k;
    double ss = 0.0;
    for (const auto& s : scores) ss += (s.rmse - row.mean_rmse) * (s.rmse - row.mean_rmse);
    row.sd_rmse = scores.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
  }
  return row;
}

}  // namespace

double best_bandwidth(const std::vector<CvRow>& table, SelectionMetric metric) {
  // Scores oriented so that larger is better.
  auto score = [metric](const CvRow& r) {
    return metric == SelectionMetric::correlation ? r.mean_corr : -r.mean_rmse;
  };
  double best = -kInf;
  for (const auto& r : table) best = std::max(best, score(r));
  double h_best = table.front().h;
  bool found = false;
  for (const auto& r : table) {
    const double s = score(r);
    const bool tied = (s == best) || (std::isfinite(best) && best - s <= kTieTol);
    if (tied && (!found || r.h > h_best)) {
      h_best = r.h;
      found = true;
    }
  }
  return h_best;
}

DenseVector grid_points(const BandwidthGrid& grid) {
  if (grid.n_points == 1 && grid.lo == grid.hi && grid.lo > 0.0) {
    return DenseVector::Constant(1, grid.lo);
  }
  if (!(grid.lo > 0.0) || !(grid.lo < grid.hi) || grid.n_points < 2 ||
      !std::isfinite(grid.hi)) {
    throw BadGrid("bandwidth grid needs 0 < lo < hi and at least two points");
  }
  DenseVector pts(grid.n_points);
  const double ratio = grid.hi / grid.lo;
  const double last = static_cast<double>(grid.n_points - 1);
  for (int i = 0; i < grid.n_points; ++i) {
    pts[i] = grid.lo * std::pow(ratio, static_cast<double>(i) / last);
  }
  pts[0] = grid.lo;
  pts[grid.n_points - 1] = grid.hi;
  return pts;
}

std::vector<std::vector<Eigen::Index>> fold_partition(Eigen::Index n, int n_folds,
                                                      std::uint64_t seed) {
  if (n_folds < 2 || n_folds > n) {
    throw BadConfig("need 2 <= n_folds <= N (n_folds = " + std::to_string(n_folds) +
                    ", N = " + std::to_string(n) + ")");
  }
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(n_folds));
  const Eigen::Index base = n / n_folds;
  const Eigen::Index extra = n % n_folds;
  std::size_t pos = 0;
  for (int f = 0; f < n_folds; ++f) {
    const Eigen::Index size = base + (f < extra ? 1 : 0);
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                perm.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(size)));
    pos += static_cast<std::size_t>(size);
  }
  return folds;
}

BandwidthSelection select_bandwidth(const Dataset& data, const BandwidthGrid& grid,
                                    const CvLayout& cv, const McrArdConfig& cfg,
                                    int jobs) {
  data.validate();
  const DenseVector hs = grid_points(grid);
  const auto folds = fold_partition(data.n_samples(), cv.n_folds, cv.seed);
  const std::size_t n_folds = folds.size();

  std::vector<Dataset> train_sets, valid_sets;
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::vector<Eigen::Index> train_rows;
    for (std::size_t g = 0; g < n_folds; ++g) {
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::vector<Eigen::Index> valid_rows = folds[f];
    std::sort(valid_rows.begin(), valid_rows.end());
    train_sets.push_back(data.subset(train_rows));
    valid_sets.push_back(data.subset(valid_rows));
  }

  const auto n_h = static_cast<std::size_t>(hs.size());
  std::vector<FoldScore> scores(n_h * n_folds);
  parallel_for(scores.size(), jobs, [&](std::size_t job) {
    const std::size_t hi = job / n_folds;
    const std::size_t f = job % n_folds;
    McrArdConfig fold_cfg = cfg;
    fold_cfg.observer = nullptr;
    fold_cfg.bandwidth = hs[static_cast<Eigen::Index>(hi)];
    scores[job] = score_fit(train_sets[f], valid_sets[f], fold_cfg);
  });

  BandwidthSelection out;
  for (std::size_t hi = 0; hi < n_h; ++hi) {
    std::vector<FoldScore> row(scores.begin() + static_cast<std::ptrdiff_t>(hi * n_folds),
                               scores.begin() + static_cast<std::ptrdiff_t>((hi + 1) * n_folds));
    out.table.push_back(summarize(hs[static_cast<Eigen::Index>(hi)], row));
  }
  out.h_best = best_bandwidth(out.table, cv.metric);
  return out;
}

BandwidthSelection select_bandwidth_holdout(const Dataset& data,
                                            const BandwidthGrid& grid,
                                            Eigen::Index n_train,
                                            std::uint64_t seed,
                                            SelectionMetric metric,
                                            const McrArdConfig& cfg, int jobs) {
  data.validate();
  if (n_train < 2 || n_train >= data.n_samples()) {
    throw BadConfig("holdout needs 2 <= n_train < N");
  }
  const DenseVector hs = grid_points(grid);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(data.n_samples()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Eigen::Index> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<Eigen::Index> valid_rows(perm.begin() + n_train, perm.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(valid_rows.begin(), valid_rows.end());
  const Dataset train = data.subset(train_rows);
  const Dataset valid = data.subset(valid_rows);

  std::vector<FoldScore> scores(static_cast<std::size_t>(hs.size()));
  parallel_for(scores.size(), jobs, [&](std::size_t i) {
    McrArdConfig run_cfg = cfg;
    run_cfg.observer = nullptr;
    run_cfg.bandwidth = hs[static_cast<Eigen::Index>(i)];
    scores[i] = score_fit(train, valid, run_cfg);
  });

  BandwidthSelection out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.table.push_back(summarize(hs[static_cast<Eigen::Index>(i)], {scores[i]}));
  }
  out.h_best = best_bandwidth(out.table, metric);
  return out;
}

std::string cv_table_csv(const std::vector<CvRow>& table) {
  std::ostringstream os;
  os << "h,mean_corr,sd_corr,mean_rmse,sd_rmse\n";
  for (const auto& r : table) {
    os << format_real(r.h) << ',' << format_real(r.mean_corr) << ','
       << format_real(r.sd_corr) << ',' << format_real(r.mean_rmse) << ','
       << format_real(r.sd_rmse) << '\n';
  }
  return os.str();
}

}  // namespace corrard
