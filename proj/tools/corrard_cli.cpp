// corrard command-line tool: fit, predict, bench, cv, lagged.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrard/csv.hpp"
#include "corrard/metrics.hpp"
#include "corrard/model_io.hpp"
#include "corrard/parallel.hpp"
#include "corrard/synthetic.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace corrard;
using corrard::cli::RunManifest;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInput = 2,
  kAllPruned = 3,
  kNumerical = 4,
  kAllCellsFailed = 5,
};

constexpr std::uint64_t kDefaultSeed = 1;

// Options shared by every command that fits MCR-ARD or searches h.
struct BandwidthFlags {
  double grid_lo = 1.0;
  double grid_hi = 1000.0;
  int grid_n = 30;
  int folds = 5;
  std::string metric = "correlation";
  long holdout_train = 0;
};

struct EstimatorFlags {
  bool no_standardize = false;
  bool intercept = false;
  std::string hessian = "exact";
  double prune_threshold = 1e6;
  int max_iters = 500;
  int max_fp_iters = 50;
};

struct FitFlags {
  std::string input;
  std::string target = "target";
  std::string algo = "mcr-ard";
  double h = 0.0;
  bool cv_h = false;
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  int jobs = 1;
};

struct PredictFlags {
  std::string model;
  std::string input;
  std::string target = "target";
  std::string out = ".";
};

struct BenchFlags {
  int reps = 100;
  std::vector<double> proportions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> scales{0.2, 0.3, 0.5, 0.7, 1.0, 1.2, 1.5};
  std::vector<std::string> algos{"lsr-ard", "mcr-ard"};
  long n_train = 300;
  long n_test = 300;
  long dim = 500;
  long n_relevant = 30;
  double fixed_h = 0.0;
  bool fix_solution = false;
  std::uint64_t seed = kDefaultSeed;
  int jobs = default_jobs();
  std::string out = ".";
};

struct CvFlags {
  std::string input;
  std::string target = "target";
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  int jobs = 1;
};

struct LaggedFlags {
  std::string series;
  std::string target_csv;
  std::string target = "target";
  int lags = 21;
  int stride = 1;
  bool normalize_target = false;
  std::string out = "design.csv";
};

// Default master seed: CORR_ARD_SEED when set, else kDefaultSeed.
std::pair<std::uint64_t, std::string> env_seed() {
  const char* env = std::getenv("CORR_ARD_SEED");
  if (env == nullptr || *env == '\0') return {kDefaultSeed, "default"};
  try {
    std::size_t pos = 0;
    const std::string text(env);
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return {static_cast<std::uint64_t>(v), "env"};
  } catch (const std::exception&) {
    throw InputError(std::string("CORR_ARD_SEED is not an unsigned integer: '") + env + "'");
  }
}

void add_bandwidth_flags(CLI::App* app, BandwidthFlags& f) {
  app->add_option("--grid-lo", f.grid_lo, "Smallest bandwidth on the log grid");
  app->add_option("--grid-hi", f.grid_hi, "Largest bandwidth on the log grid");
  app->add_option("--grid-n", f.grid_n, "Number of grid points");
  app->add_option("--folds", f.folds, "Cross-validation folds");
  app->add_option("--metric", f.metric, "Selection metric")
      ->check(CLI::IsMember({"correlation", "rmse"}));
  app->add_option("--holdout-train", f.holdout_train,
                  "Select h on one seeded split with this many training rows "
                  "instead of k-fold CV (0 = k-fold)");
}

void add_estimator_flags(CLI::App* app, EstimatorFlags& f) {
  app->add_flag("--no-standardize", f.no_standardize, "Fit on raw covariates");
  app->add_flag("--intercept", f.intercept,
                "Append a constant column that is never pruned (default: center the target)");
  app->add_option("--hessian", f.hessian, "MCR-ARD Hessian mode")
      ->check(CLI::IsMember({"exact", "gauss"}));
  app->add_option("--prune-threshold", f.prune_threshold, "Relevance pruning threshold");
  app->add_option("--max-iters", f.max_iters, "Outer iteration cap");
  app->add_option("--max-fp-iters", f.max_fp_iters, "MCR-ARD fixed-point pass cap");
}

PipelineOptions pipeline_options(const EstimatorFlags& e, const BandwidthFlags& b,
                                 std::uint64_t seed, int jobs) {
  PipelineOptions opts;
  opts.standardize = !e.no_standardize;
  opts.intercept = e.intercept;
  opts.lsr.prune_threshold = e.prune_threshold;
  opts.lsr.max_iters = e.max_iters;
  opts.mcr.prune_threshold = e.prune_threshold;
  opts.mcr.max_outer_iters = e.max_iters;
  opts.mcr.max_fp_iters = e.max_fp_iters;
  opts.mcr.hessian_mode =
      e.hessian == "gauss" ? HessianMode::gauss_style_psd : HessianMode::exact_with_safeguard;
  opts.bandwidth.grid = BandwidthGrid{b.grid_lo, b.grid_hi, b.grid_n};
  opts.bandwidth.cv.n_folds = b.folds;
  opts.bandwidth.cv.seed = seed;
  opts.bandwidth.cv.metric =
      b.metric == "rmse" ? SelectionMetric::rmse : SelectionMetric::correlation;
  if (b.holdout_train > 0) opts.bandwidth.holdout_train = b.holdout_train;
  opts.jobs = jobs;
  return opts;
}

json optional_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

void write_text(const fs::path& path, const std::string& text, RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  manifest.outputs.push_back(path.string());
}

std::vector<std::string> covariate_names(const CsvTable& table, const std::string& target) {
  std::vector<std::string> names;
  for (const auto& h : table.header) {
    if (h != target) names.push_back(h);
  }
  return names;
}

json fit_report(const TrainedModel& model) {
  const FittedModel& fit = model.fit;
  json active = json::array();
  for (auto d : model.selected_features()) {
    const auto u = static_cast<std::size_t>(d);
    active.push_back(u < model.feature_names.size() ? model.feature_names[u]
                                                    : std::to_string(d));
  }
  json report;
  report["algorithm"] = to_string(fit.algorithm);
  report["n_features"] = model.n_features();
  report["n_active"] = model.selected_features().size();
  report["active_features"] = active;
  report["n_iters"] = fit.n_iters;
  report["converged"] = fit.converged;
  report["bandwidth"] = optional_json(fit.bandwidth);
  report["noise_variance"] = optional_json(fit.noise_variance);
  report["n_hessian_safeguards"] = fit.n_hessian_safeguards;
  report["objective_trace"] = fit.objective_trace;
  return report;
}

// ---------------------------------------------------------------------------

int run_fit(const FitFlags& f, const EstimatorFlags& e, const BandwidthFlags& b,
            const CLI::Option* h_opt, RunManifest& manifest) {
  const Algorithm algo = parse_algorithm(f.algo);
  if (algo == Algorithm::mcr_ard && h_opt->count() == 0 && !f.cv_h) {
    throw InputError("mcr-ard needs either --h <value> or --cv-h");
  }
  manifest.inputs.push_back(f.input);
  const Dataset raw = read_dataset_csv(f.input, f.target);
  PipelineOptions opts = pipeline_options(e, b, f.seed, f.jobs);
  opts.algorithm = algo;
  if (algo == Algorithm::mcr_ard && !f.cv_h) opts.bandwidth.fixed_h = f.h;
  manifest.details["bandwidth_mode"] =
      algo == Algorithm::lsr_ard ? "none" : (f.cv_h ? (b.holdout_train > 0 ? "holdout" : "cv") : "fixed");

  const fs::path out(f.out);
  fs::create_directories(out);
  try {
    const TrainedModel model = train_model(raw, opts);
    save_model(model, (out / "model.json").string());
    manifest.outputs.push_back((out / "model.json").string());
    json report = fit_report(model);
    if (model.bandwidth_search) {
      write_text(out / "cv_table.csv", cv_table_csv(model.bandwidth_search->table), manifest);
      report["selected_h"] = model.bandwidth_search->h_best;
    }
    write_text(out / "fit_report.json", report.dump(2) + "\n", manifest);
    std::cout << "fitted " << to_string(algo) << ": " << model.selected_features().size()
              << " of " << model.n_features() << " features active, "
              << model.fit.n_iters << " iterations";
    if (model.fit.bandwidth) std::cout << ", h = " << format_real(*model.fit.bandwidth);
    std::cout << '\n';
    return kOk;
  } catch (const AllFeaturesPruned& ex) {
    json report;
    report["algorithm"] = to_string(algo);
    report["error"] = "AllFeaturesPruned";
    report["n_iters"] = ex.model().n_iters;
    report["objective_trace"] = ex.model().objective_trace;
    write_text(out / "fit_report.json", report.dump(2) + "\n", manifest);
    throw;
  }
}

int run_predict(const PredictFlags& f, RunManifest& manifest) {
  manifest.inputs.push_back(f.model);
  manifest.inputs.push_back(f.input);
  const TrainedModel model = load_model(f.model);
  const CsvTable table = read_csv(f.input);
  const std::vector<std::string> names = covariate_names(table, f.target);

  if (!model.feature_names.empty() ? names != model.feature_names
                                   : static_cast<Eigen::Index>(names.size()) != model.n_features()) {
    std::ostringstream msg;
    msg << "feature mismatch: model expects " << model.n_features() << " covariates, input has "
        << names.size();
    const std::set<std::string> have(names.begin(), names.end());
    const std::set<std::string> want(model.feature_names.begin(), model.feature_names.end());
    std::string missing, extra;
    for (const auto& n : model.feature_names)
      if (!have.count(n)) missing += (missing.empty() ? "" : ", ") + n;
    for (const auto& n : names)
      if (!want.count(n)) extra += (extra.empty() ? "" : ", ") + n;
    if (!missing.empty()) msg << "; missing: " << missing;
    if (!extra.empty()) msg << "; unexpected: " << extra;
    if (missing.empty() && extra.empty() && !model.feature_names.empty()) {
      msg << "; columns are in a different order";
    }
    throw InputError(msg.str());
  }

  const Eigen::Index target_col = table.column(f.target);
  DenseMatrix X(table.values.rows(), static_cast<Eigen::Index>(names.size()));
  for (Eigen::Index c = 0, j = 0; c < table.values.cols(); ++c) {
    if (c != target_col) X.col(j++) = table.values.col(c);
  }
  const DenseVector pred = model.predict(X);

  const fs::path out(f.out);
  fs::create_directories(out);
  std::ostringstream csv;
  write_csv(csv, {"prediction"}, pred);
  write_text(out / "predictions.csv", csv.str(), manifest);

  if (target_col >= 0) {
    const DenseVector truth = table.values.col(target_col);
    json metrics;
    metrics["n"] = truth.size();
    metrics["correlation"] = optional_json(try_correlation(pred, truth));
    metrics["rmse"] = rmse(pred, truth);
    write_text(out / "metrics.json", metrics.dump(2) + "\n", manifest);
    std::cout << "rmse = " << format_real(rmse(pred, truth)) << '\n';
  }
  return kOk;
}

int run_bench(const BenchFlags& f, const EstimatorFlags& e, const BandwidthFlags& b,
              const CLI::Option* fixed_h_opt, RunManifest& manifest) {
  BenchConfig cfg;
  cfg.data = SyntheticSpec{f.n_train, f.n_test, f.dim, f.n_relevant, 0};
  cfg.proportions = f.proportions;
  cfg.scales = f.scales;
  cfg.algorithms.clear();
  for (const auto& a : f.algos) cfg.algorithms.push_back(parse_algorithm(a));
  cfg.reps = f.reps;
  cfg.master_seed = f.seed;
  cfg.fix_solution = f.fix_solution;
  cfg.jobs = f.jobs;
  cfg.pipeline = pipeline_options(e, b, 0, 1);
  const bool fixed = fixed_h_opt->count() > 0;
  if (fixed) cfg.pipeline.bandwidth.fixed_h = f.fixed_h;
  corruption_cells(cfg);
  cfg.data.validate();

  manifest.details["bandwidth_mode"] = fixed ? "fixed" : (b.holdout_train > 0 ? "holdout" : "cv");
  manifest.details["seed_derivation"] =
      "data_seed = derive(master, {rep}); cell_seed = derive(master, {rep, proportion_index, "
      "scale_index}); corruption seed = derive(cell_seed, {0}); cv seed = derive(cell_seed, {1})";
  json data_seeds = json::array();
  for (int r = 0; r < cfg.reps; ++r) {
    data_seeds.push_back(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(r)}));
  }
  manifest.details["data_seeds"] = data_seeds;
  if (cfg.fix_solution) manifest.details["solution_seed"] = derive_seed(cfg.master_seed, {});

  const std::vector<BenchRow> rows = run_monte_carlo(cfg);
  const auto summary = summarize_bench(rows);

  const fs::path out(f.out);
  fs::create_directories(out);
  write_text(out / "bench_results.csv", bench_results_csv(rows), manifest);
  write_text(out / "bench_summary.csv", bench_summary_csv(summary), manifest);
  write_text(out / "bench_timing.csv", bench_timing_csv(rows), manifest);

  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
  manifest.details["n_rows"] = rows.size();
  manifest.details["n_failed_rows"] = failed;
  for (const auto& s : summary) {
    std::cout << to_string(s.algorithm) << " p=" << s.proportion << " b=" << s.scale
              << " corr=" << s.mean_corr << " rmse=" << s.mean_rmse
              << " selected=" << s.mean_selected << " recall=" << s.mean_recall
              << " failed=" << s.n_failed << "/" << s.n_reps << '\n';
  }
  if (!rows.empty() && failed == rows.size()) {
    manifest.error = "every bench cell failed";
    std::cerr << "error: every bench cell failed\n";
    return kAllCellsFailed;
  }
  return kOk;
}

int run_cv(const CvFlags& f, const EstimatorFlags& e, const BandwidthFlags& b,
           RunManifest& manifest) {
  manifest.inputs.push_back(f.input);
  const Dataset raw = read_dataset_csv(f.input, f.target);
  PipelineOptions opts = pipeline_options(e, b, f.seed, f.jobs);
  opts.algorithm = Algorithm::mcr_ard;
  const PreparedData prepared = prepare_training_data(raw, opts);
  const BandwidthSelection sel = search_bandwidth(prepared, opts);

  const fs::path out(f.out);
  fs::create_directories(out);
  write_text(out / "cv_table.csv", cv_table_csv(sel.table), manifest);
  manifest.details["selected_h"] = sel.h_best;
  std::cout << format_real(sel.h_best) << '\n';
  return kOk;
}

int run_lagged(const LaggedFlags& f, RunManifest& manifest) {
  manifest.inputs.push_back(f.series);
  manifest.inputs.push_back(f.target_csv);
  const CsvTable series_table = read_csv(f.series);
  const CsvTable target_table = read_csv(f.target_csv);

  const bool has_time = !series_table.header.empty() && series_table.header[0] == "time_index";
  const Eigen::Index first_source = has_time ? 1 : 0;
  const Eigen::Index n_sources = series_table.values.cols() - first_source;
  if (n_sources < 1) throw InputError(f.series + ": no source columns");
  const DenseMatrix series = series_table.values.rightCols(n_sources);

  const Eigen::Index tcol = target_table.column(f.target);
  if (tcol < 0) {
    throw InputError(f.target_csv + ": missing target column '" + f.target + "'", 1);
  }
  if (target_table.values.rows() != series.rows()) {
    throw InputError("series has " + std::to_string(series.rows()) + " samples but target has " +
                     std::to_string(target_table.values.rows()));
  }
  const Eigen::Index target_time = target_table.column("time_index");
  if (has_time && target_time >= 0 &&
      series_table.values.col(0) != target_table.values.col(target_time)) {
    throw InputError("time_index columns of series and target differ");
  }
  DenseVector target = target_table.values.col(tcol);
  if (f.normalize_target) {
    auto [u, scaling] = normalize_target_01(target);
    target = std::move(u);
    manifest.details["target_min"] = scaling.min;
    manifest.details["target_max"] = scaling.max;
  }

  const Dataset design = build_lagged_design(series, target, LagSpec{f.lags, f.stride});
  const fs::path out(f.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ostringstream csv;
  write_dataset_csv(csv, design, f.target);
  write_text(out, csv.str(), manifest);
  manifest.details["n_rows"] = design.n_samples();
  manifest.details["n_columns"] = design.n_features();
  std::cout << design.n_samples() << " rows x " << design.n_features() << " covariates\n";
  return kOk;
}

// Lines of the full resolved config that belong to `command`; loadable again
// with --config.
std::string command_config_text(const CLI::App& app, const std::string& command) {
  std::istringstream all(app.config_to_str(true, false));
  std::string line, out;
  while (std::getline(all, line)) {
    if (line.rfind(command + ".", 0) == 0) out += line + "\n";
  }
  return out;
}

json resolved_options(const CLI::App* app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (opt->get_expected_min() == 0) {
      cfg[name] = "false";  // flag not given
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Bayesian regression with correntropy (MCR-ARD) and Gaussian (LSR-ARD) "
               "likelihoods"};
  app.set_version_flag("--version", CORRARD_VERSION);
  app.set_config("--config", "", "Read options from a key=value config file (use a "
                                 "[command] section for command options)");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  BandwidthFlags bw;
  EstimatorFlags est;

  FitFlags fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a model to a CSV dataset");
  fit_cmd->set_help_flag("--help", "Print this help message and exit");  // frees --h
  fit_cmd->add_option("--input", fit.input, "Training CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--target", fit.target, "Name of the response column");
  fit_cmd->add_option("--algo", fit.algo, "Estimator")
      ->check(CLI::IsMember({"lsr-ard", "mcr-ard"}));
  CLI::Option* h_opt = fit_cmd->add_option("--h", fit.h, "Fixed kernel bandwidth")
                           ->check(CLI::PositiveNumber);
  CLI::Option* cvh_opt =
      fit_cmd->add_flag("--cv-h", fit.cv_h, "Select the bandwidth by cross-validation");
  h_opt->excludes(cvh_opt);
  fit_cmd->add_option("--seed", fit.seed, "Master seed (fold shuffling)");
  fit_cmd->add_option("--jobs", fit.jobs, "Worker threads for the bandwidth search")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--out", fit.out, "Output directory");
  add_estimator_flags(fit_cmd, est);
  add_bandwidth_flags(fit_cmd, bw);

  PredictFlags pred;
  CLI::App* pred_cmd = app.add_subcommand("predict", "Predict with a saved model");
  pred_cmd->add_option("--model", pred.model, "model.json from fit")
      ->required()->check(CLI::ExistingFile);
  pred_cmd->add_option("--input", pred.input, "Covariate CSV (a target column is optional)")
      ->required()->check(CLI::ExistingFile);
  pred_cmd->add_option("--target", pred.target, "Name of the optional truth column");
  pred_cmd->add_option("--out", pred.out, "Output directory");

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Synthetic corrupted-covariate benchmark");
  bench_cmd->add_option("--reps", bench.reps, "Monte-Carlo repetitions")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--proportions", bench.proportions, "Corruption proportions")
      ->delimiter(',')->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--scales", bench.scales, "Laplace scales")
      ->delimiter(',')->check(CLI::PositiveNumber);
  bench_cmd->add_option("--algos", bench.algos, "Estimators to run")
      ->delimiter(',')->check(CLI::IsMember({"lsr-ard", "mcr-ard"}));
  bench_cmd->add_option("--n-train", bench.n_train, "Training samples");
  bench_cmd->add_option("--n-test", bench.n_test, "Test samples");
  bench_cmd->add_option("--dim", bench.dim, "Covariate dimension");
  bench_cmd->add_option("--n-relevant", bench.n_relevant, "Non-zero true weights");
  CLI::Option* fixed_h_opt =
      bench_cmd->add_option("--fixed-h", bench.fixed_h, "Skip CV and use this bandwidth")
          ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--fix-solution", bench.fix_solution,
                      "Use one true weight vector for every repetition");
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "Output directory");
  add_estimator_flags(bench_cmd, est);
  add_bandwidth_flags(bench_cmd, bw);

  CvFlags cv;
  CLI::App* cv_cmd = app.add_subcommand("cv", "Cross-validate the MCR-ARD bandwidth");
  cv_cmd->add_option("--input", cv.input, "Training CSV")->required()->check(CLI::ExistingFile);
  cv_cmd->add_option("--target", cv.target, "Name of the response column");
  cv_cmd->add_option("--seed", cv.seed, "Master seed (fold shuffling)");
  cv_cmd->add_option("--jobs", cv.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cv_cmd->add_option("--out", cv.out, "Output directory");
  add_estimator_flags(cv_cmd, est);
  add_bandwidth_flags(cv_cmd, bw);

  LaggedFlags lag;
  CLI::App* lag_cmd = app.add_subcommand("lagged", "Build a lagged design from time series");
  lag_cmd->add_option("--series", lag.series, "Time-series CSV (time_index, then one column per source)")
      ->required()->check(CLI::ExistingFile);
  lag_cmd->add_option("--target-csv", lag.target_csv, "CSV holding the target series")
      ->required()->check(CLI::ExistingFile);
  lag_cmd->add_option("--target", lag.target, "Name of the target column");
  lag_cmd->add_option("--lags", lag.lags, "Samples per source window (current sample included)")
      ->check(CLI::PositiveNumber);
  lag_cmd->add_option("--stride", lag.stride, "Spacing between window samples")
      ->check(CLI::PositiveNumber);
  lag_cmd->add_flag("--normalize-target", lag.normalize_target, "Map the target onto [0, 1]");
  lag_cmd->add_option("--out", lag.out, "Output design CSV");

  RunManifest manifest;
  manifest.started_utc = cli::utc_now();
  for (int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);

  std::optional<fs::path> manifest_path;
  int code = kOk;
  try {
    // The environment seed becomes the default before flags are applied.
    const auto [seed, source] = env_seed();
    fit.seed = bench.seed = cv.seed = seed;
    manifest.seed_source = source;
    try {
      app.parse(argc, argv);
    } catch (const CLI::Success& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kInput;
    }

    CLI::App* sub = app.get_subcommands().front();
    manifest.command = sub->get_name();
    manifest.config = resolved_options(sub);
    manifest.config_text = command_config_text(app, sub->get_name());
    if (auto* seed_opt = sub->get_option_no_throw("--seed"); seed_opt && seed_opt->count() > 0) {
      manifest.seed_source = "flag";
    }

    if (sub == fit_cmd) {
      manifest.master_seed = fit.seed;
      manifest_path = fs::path(fit.out) / "manifest.json";
      code = run_fit(fit, est, bw, h_opt, manifest);
    } else if (sub == pred_cmd) {
      manifest.seed_source = "unused";
      manifest_path = fs::path(pred.out) / "manifest.json";
      code = run_predict(pred, manifest);
    } else if (sub == bench_cmd) {
      manifest.master_seed = bench.seed;
      manifest_path = fs::path(bench.out) / "manifest.json";
      code = run_bench(bench, est, bw, fixed_h_opt, manifest);
    } else if (sub == cv_cmd) {
      manifest.master_seed = cv.seed;
      manifest_path = fs::path(cv.out) / "manifest.json";
      code = run_cv(cv, est, bw, manifest);
    } else if (sub == lag_cmd) {
      manifest.seed_source = "unused";
      const fs::path out(lag.out);
      manifest_path = out.parent_path() / (out.stem().string() + ".manifest.json");
      code = run_lagged(lag, manifest);
    }
  } catch (const AllFeaturesPruned& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest.error = e.what();
    code = kAllPruned;
  } catch (const NotSPD& e) {
    std::cerr << "error: numerical failure: " << e.what() << '\n';
    manifest.error = e.what();
    code = kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest.error = e.what();
    code = kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest.error = e.what();
    code = kInternal;
  }

  if (manifest_path) {
    manifest.exit_code = code;
    manifest.finished_utc = cli::utc_now();
    try {
      if (manifest_path->has_parent_path()) fs::create_directories(manifest_path->parent_path());
      cli::write_manifest(manifest, manifest_path->string());
    } catch (const std::exception& e) {
      std::cerr << "error: cannot write manifest: " << e.what() << '\n';
      if (code == kOk) code = kInternal;
    }
  }
  return code;
}
