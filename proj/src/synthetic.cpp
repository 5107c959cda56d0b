#include "corrard/synthetic.hpp"

#include <array>
#include <chrono>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "corrard/csv.hpp"
#include "corrard/metrics.hpp"
#include "corrard/parallel.hpp"

namespace corrard {

namespace {

void fill_normal(DenseMatrix& m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  // Row-major fill order so the stream maps to samples one at a time.
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  int count = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.count = static_cast<int>(xs.size());
  if (xs.empty()) {
    m.mean = m.sd = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return m;
}

template <typename T>
std::string optional_cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_real(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_train < 1 || n_test < 1 || dim < 1) {
    throw BadConfig("sample counts and dimension must be >= 1");
  }
  if (n_relevant < 0 || n_relevant > dim) {
    throw BadConfig("n_relevant must lie in [0, dim]");
  }
}

DenseVector draw_solution(Eigen::Index dim, Eigen::Index n_relevant,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseVector w = DenseVector::Zero(dim);
  for (Eigen::Index d = 0; d < n_relevant; ++d) w[d] = normal(rng);
  return w;
}

SyntheticData generate(const SyntheticSpec& spec,
                       const std::optional<DenseVector>& fixed_w) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  SyntheticData out;
  out.w_true = DenseVector::Zero(spec.dim);
  for (Eigen::Index d = 0; d < spec.n_relevant; ++d) out.w_true[d] = normal(rng);
  if (fixed_w) {
    if (fixed_w->size() != spec.dim) {
      throw DimensionMismatch("fixed solution has the wrong dimension");
    }
    out.w_true = *fixed_w;
  }
  for (Eigen::Index d = 0; d < spec.dim; ++d) {
    if (out.w_true[d] != 0.0) out.relevant.push_back(d);
  }

  out.train.X.resize(spec.n_train, spec.dim);
  out.test.X.resize(spec.n_test, spec.dim);
  fill_normal(out.train.X, rng);
  fill_normal(out.test.X, rng);
  out.train.t = out.train.X * out.w_true;
  out.test.t = out.test.X * out.w_true;
  return out;
}

double sample_laplace(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  for (;;) {
    const double u = uniform(rng);
    const double tail = 1.0 - 2.0 * std::abs(u);
    if (tail > 0.0) return -scale * std::copysign(1.0, u) * std::log(tail);
  }
}

Dataset corrupt_covariates(const Dataset& train, const CorruptionSpec& spec) {
  if (!(spec.proportion >= 0.0 && spec.proportion <= 1.0)) {
    throw BadConfig("corruption proportion must lie in [0, 1]");
  }
  Dataset out = train;
  const Eigen::Index n_cells = train.X.size();
  const auto n_hit = static_cast<Eigen::Index>(
      std::llround(spec.proportion * static_cast<double>(n_cells)));
  if (n_hit == 0) return out;
  if (!(spec.laplace_scale > 0.0)) throw BadConfig("Laplace scale must be > 0");

  // Partial Fisher-Yates: the first n_hit slots become a uniform sample of
  // distinct cells.
  std::mt19937_64 rng(spec.seed);
  std::vector<Eigen::Index> cells(static_cast<std::size_t>(n_cells));
  std::iota(cells.begin(), cells.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < n_hit; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, n_cells - 1);
    std::swap(cells[static_cast<std::size_t>(i)],
              cells[static_cast<std::size_t>(pick(rng))]);
  }
  for (Eigen::Index i = 0; i < n_hit; ++i) {
    const Eigen::Index cell = cells[static_cast<std::size_t>(i)];
    out.X(cell / train.X.cols(), cell % train.X.cols()) +=
        sample_laplace(rng, spec.laplace_scale);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(master));
  words.push_back(static_cast<std::uint32_t>(master >> 32));
  for (auto k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<std::pair<double, double>> corruption_cells(const BenchConfig& cfg) {
  if (cfg.proportions.empty()) return {{0.0, 0.0}};
  std::vector<std::pair<double, double>> cells;
  for (double p : cfg.proportions) {
    if (cfg.scales.empty()) {
      if (p != 0.0) throw BadConfig("corruption proportion > 0 needs a Laplace scale");
      cells.emplace_back(p, 0.0);
      continue;
    }
    for (double s : cfg.scales) cells.emplace_back(p, s);
  }
  return cells;
}

std::vector<BenchRow> run_bench_cell(const BenchConfig& cfg, std::size_t proportion_index,
                                     std::size_t scale_index, int rep) {
  const double proportion =
      cfg.proportions.empty() ? 0.0 : cfg.proportions.at(proportion_index);
  const double scale = cfg.proportions.empty() || cfg.scales.empty()
                           ? 0.0
                           : cfg.scales.at(scale_index);
  const auto rep_key = static_cast<std::uint64_t>(rep);

  // Clean data depend on the repetition only, so every corruption cell of a
  // repetition perturbs the same draw.
  SyntheticSpec spec = cfg.data;
  spec.seed = derive_seed(cfg.master_seed, {rep_key});
  std::optional<DenseVector> fixed_w;
  if (cfg.fix_solution) {
    fixed_w = draw_solution(spec.dim, spec.n_relevant, derive_seed(cfg.master_seed, {}));
  }
  const SyntheticData synth = generate(spec, fixed_w);
  const std::uint64_t cell_seed =
      derive_seed(cfg.master_seed, {rep_key, proportion_index, scale_index});
  const Dataset train = corrupt_covariates(
      synth.train, CorruptionSpec{proportion, scale, derive_seed(cell_seed, {0})});

  std::vector<BenchRow> rows;
  for (Algorithm algo : cfg.algorithms) {
    BenchRow row;
    row.algorithm = algo;
    row.proportion_index = proportion_index;
    row.scale_index = scale_index;
    row.proportion = proportion;
    row.scale = scale;
    row.rep = rep;
    row.data_seed = spec.seed;
    row.cell_seed = cell_seed;

    PipelineOptions opts = cfg.pipeline;
    opts.algorithm = algo;
    opts.jobs = 1;
    opts.bandwidth.cv.seed = derive_seed(cell_seed, {1});
    const auto start = std::chrono::steady_clock::now();
    try {
      const TrainedModel model = train_model(train, opts);
      const DenseVector pred = model.predict(synth.test.X);
      row.correlation = try_correlation(pred, synth.test.t);
      row.rmse = rmse(pred, synth.test.t);
      const auto selected = model.selected_features();
      row.n_selected = static_cast<Eigen::Index>(selected.size());
      if (!synth.relevant.empty()) row.recall = selection_recall(selected, synth.relevant);
      if (model.fit.bandwidth) row.selected_h = *model.fit.bandwidth;
      row.n_iters = model.fit.n_iters;
      if (!row.correlation) row.error = "UndefinedCorrelation";
    } catch (const AllFeaturesPruned& e) {
      row.error = "AllFeaturesPruned";
      row.n_selected = 0;
      if (!synth.relevant.empty()) row.recall = 0.0;
      row.n_iters = e.model().n_iters;
    } catch (const NotSPD&) {
      row.error = "NotSPD";
    } catch (const Error&) {
      row.error = "Error";
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchRow> run_monte_carlo(const BenchConfig& cfg) {
  cfg.data.validate();
  if (cfg.reps < 1) throw BadConfig("reps must be >= 1");
  if (cfg.algorithms.empty()) throw BadConfig("no algorithms selected");

  struct Task {
    std::size_t p, s;
    int rep;
  };
  std::vector<Task> tasks;
  const std::size_t n_p = cfg.proportions.empty() ? 1 : cfg.proportions.size();
  const std::size_t n_s =
      cfg.proportions.empty() || cfg.scales.empty() ? 1 : cfg.scales.size();
  corruption_cells(cfg);  // validates the grid
  for (std::size_t p = 0; p < n_p; ++p) {
    for (std::size_t s = 0; s < n_s; ++s) {
      for (int r = 0; r < cfg.reps; ++r) tasks.push_back({p, s, r});
    }
  }

  std::vector<std::vector<BenchRow>> results(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = run_bench_cell(cfg, tasks[i].p, tasks[i].s, tasks[i].rep);
  });

  std::vector<BenchRow> rows;
  for (auto& cell : results) {
    for (auto& row : cell) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchSummaryRow> summarize_bench(const std::vector<BenchRow>& rows) {
  using Key = std::tuple<std::size_t, std::size_t, int>;
  std::map<Key, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) {
    groups[{r.proportion_index, r.scale_index, static_cast<int>(r.algorithm)}].push_back(&r);
  }
  std::vector<BenchSummaryRow> out;
  for (const auto& [key, members] : groups) {
    BenchSummaryRow s;
    s.algorithm = members.front()->algorithm;
    s.proportion = members.front()->proportion;
    s.scale = members.front()->scale;
    s.n_reps = static_cast<int>(members.size());
    std::vector<double> corr, err, sel, rec, hs;
    for (const BenchRow* r : members) {
      if (!r->error.empty()) ++s.n_failed;
      if (r->correlation) corr.push_back(*r->correlation);
      if (r->rmse) err.push_back(*r->rmse);
      if (r->n_selected) sel.push_back(static_cast<double>(*r->n_selected));
      if (r->recall) rec.push_back(*r->recall);
      if (r->selected_h) hs.push_back(*r->selected_h);
    }
    const Moments mc = moments(corr), me = moments(err), ms = moments(sel),
                  mr = moments(rec), mh = moments(hs);
    s.mean_corr = mc.mean;
    s.sd_corr = mc.sd;
    s.mean_rmse = me.mean;
    s.sd_rmse = me.sd;
    s.mean_selected = ms.mean;
    s.sd_selected = ms.sd;
    s.mean_recall = mr.mean;
    s.sd_recall = mr.sd;
    s.mean_h = mh.mean;
    out.push_back(s);
  }
  return out;
}

std::string bench_results_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "algorithm,proportion,scale,rep,data_seed,cell_seed,correlation,rmse,"
        "n_selected,recall,selected_h,n_iters,error\n";
  for (const auto& r : rows) {
    os << to_string(r.algorithm) << ',' << format_real(r.proportion) << ','
       << format_real(r.scale) << ',' << r.rep << ',' << r.data_seed << ','
       << r.cell_seed << ',' << optional_cell(r.correlation) << ','
       << optional_cell(r.rmse) << ',' << optional_cell(r.n_selected) << ','
       << optional_cell(r.recall) << ',' << optional_cell(r.selected_h) << ','
       << r.n_iters << ',' << r.error << '\n';
  }
  return os.str();
}

std::string bench_summary_csv(const std::vector<BenchSummaryRow>& rows) {
  std::ostringstream os;
  os << "algorithm,proportion,scale,n_reps,n_failed,mean_corr,sd_corr,mean_rmse,"
        "sd_rmse,mean_selected,sd_selected,mean_recall,sd_recall,mean_h\n";
  for (const auto& s : rows) {
    os << to_string(s.algorithm) << ',' << format_real(s.proportion) << ','
       << format_real(s.scale) << ',' << s.n_reps << ',' << s.n_failed << ','
       << format_real(s.mean_corr) << ',' << format_real(s.sd_corr) << ','
       << format_real(s.mean_rmse) << ',' << format_real(s.sd_rmse) << ','
       << format_real(s.mean_selected) << ',' << format_real(s.sd_selected) << ','
       << format_real(s.mean_recall) << ',' << format_real(s.sd_recall) << ','
       << format_real(s.mean_h) << '\n';
  }
  return os.str();
}

std::string bench_timing_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "algorithm,proportion,scale,rep,wall_time_s\n";
  for (const auto& r : rows) {
    os << to_string(r.algorithm) << ',' << format_real(r.proportion) << ','
       << format_real(r.scale) << ',' << r.rep << ',' << format_real(r.wall_time) << '\n';
  }
  return os.str();
}

}  // namespace corrard
