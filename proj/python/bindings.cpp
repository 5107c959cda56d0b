#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "corrard/bandwidth.hpp"
#include "corrard/data.hpp"
#include "corrard/lsr_ard.hpp"
#include "corrard/mcr_ard.hpp"
#include "corrard/metrics.hpp"
#include "corrard/model_io.hpp"
#include "corrard/pipeline.hpp"
#include "corrard/synthetic.hpp"

namespace py = pybind11;
using namespace corrard;

namespace {

PyObject* all_pruned_type = nullptr;

Dataset make_dataset(const DenseMatrix& X, const DenseVector& t,
                     std::vector<std::string> names) {
  Dataset d{X, t, std::move(names)};
  d.validate();
  return d;
}

HessianMode parse_hessian(const std::string& mode) {
  if (mode == "exact") return HessianMode::exact_with_safeguard;
  if (mode == "gauss") return HessianMode::gauss_style_psd;
  throw BadConfig("hessian must be 'exact' or 'gauss', got '" + mode + "'");
}

SelectionMetric parse_metric(const std::string& metric) {
  if (metric == "correlation") return SelectionMetric::correlation;
  if (metric == "rmse") return SelectionMetric::rmse;
  throw BadConfig("metric must be 'correlation' or 'rmse', got '" + metric + "'");
}

py::list cv_table(const std::vector<CvRow>& table) {
  py::list rows;
  for (const auto& r : table) {
    py::dict row;
    row["h"] = r.h;
    row["mean_corr"] = r.mean_corr;
    row["sd_corr"] = r.sd_corr;
    row["mean_rmse"] = r.mean_rmse;
    row["sd_rmse"] = r.sd_rmse;
    row["n_failed"] = r.n_failed;
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_corrard, m) {
  m.doc() = "Sparse Bayesian regression with correntropy and Gaussian likelihoods";
  m.attr("__version__") = CORRARD_VERSION;

  auto error = py::register_exception<Error>(m, "CorrardError", PyExc_ValueError);
  py::register_exception<NotSPD>(m, "NotSPD", error.ptr());
  py::register_exception<InputError>(m, "InputError", error.ptr());
  // AllFeaturesPruned is translated by hand so the partial model survives.
  // The module attribute keeps the type alive for the translator.
  all_pruned_type =
      py::exception<AllFeaturesPruned>(m, "AllFeaturesPruned", error.ptr()).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const AllFeaturesPruned& e) {
      py::object exc = py::handle(all_pruned_type)(e.what());
      exc.attr("model") = py::cast(e.model());
      PyErr_SetObject(all_pruned_type, exc.ptr());
    }
  });

  py::class_<FittedModel>(m, "FittedModel")
      .def_property_readonly("algorithm", [](const FittedModel& f) { return to_string(f.algorithm); })
      .def_readonly("weights", &FittedModel::weights)
      .def_readonly("relevance", &FittedModel::relevance)
      .def_readonly("active_mask", &FittedModel::active_mask)
      .def_property_readonly("active_indices", &FittedModel::active_indices)
      .def_readonly("noise_variance", &FittedModel::noise_variance)
      .def_readonly("bandwidth", &FittedModel::bandwidth)
      .def_readonly("n_iters", &FittedModel::n_iters)
      .def_readonly("converged", &FittedModel::converged)
      .def_readonly("n_hessian_safeguards", &FittedModel::n_hessian_safeguards)
      .def_readonly("objective_trace", &FittedModel::objective_trace)
      .def("predict", [](const FittedModel& f, const DenseMatrix& X) { return predict(f, X); },
           py::arg("X"));

  py::class_<TrainedModel>(m, "TrainedModel")
      .def_readonly("fit", &TrainedModel::fit)
      .def_readonly("feature_names", &TrainedModel::feature_names)
      .def_readonly("standardized", &TrainedModel::standardized)
      .def_readonly("intercept", &TrainedModel::intercept)
      .def_property_readonly("bandwidth", [](const TrainedModel& t) { return t.fit.bandwidth; })
      .def_property_readonly("cv_table", [](const TrainedModel& t) -> py::object {
        if (!t.bandwidth_search) return py::none();
        return cv_table(t.bandwidth_search->table);
      })
      .def("predict", &TrainedModel::predict, py::arg("X"))
      .def("weights", &TrainedModel::original_weights)
      .def("intercept_value", &TrainedModel::original_intercept)
      .def("selected_features", &TrainedModel::selected_features)
      .def("save", [](const TrainedModel& t, const std::string& path) { save_model(t, path); },
           py::arg("path"))
      .def("to_json", [](const TrainedModel& t) { return model_to_json(t).dump(); });

  m.def("load_model", &load_model, py::arg("path"));
  m.def("model_from_json",
        [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));

  m.def(
      "fit_lsr_ard",
      [](const DenseMatrix& X, const DenseVector& t, double prune_threshold, int max_iters,
         double w_tol, std::optional<double> noise_variance) {
        LsrArdConfig cfg;
        cfg.prune_threshold = prune_threshold;
        cfg.max_iters = max_iters;
        cfg.w_tol = w_tol;
        cfg.fixed_noise_variance = noise_variance;
        py::gil_scoped_release release;
        return fit_lsr_ard(make_dataset(X, t, {}), cfg);
      },
      py::arg("X"), py::arg("t"), py::arg("prune_threshold") = 1e6,
      py::arg("max_iters") = 500, py::arg("w_tol") = 1e-6,
      py::arg("noise_variance") = py::none());

  m.def(
      "fit_mcr_ard",
      [](const DenseMatrix& X, const DenseVector& t, double h, double prune_threshold,
         int max_iters, int max_fp_iters, const std::string& hessian, bool update_relevance) {
        McrArdConfig cfg;
        cfg.bandwidth = h;
        cfg.prune_threshold = prune_threshold;
        cfg.max_outer_iters = max_iters;
        cfg.max_fp_iters = max_fp_iters;
        cfg.hessian_mode = parse_hessian(hessian);
        cfg.update_relevance = update_relevance;
        py::gil_scoped_release release;
        return fit_mcr_ard(make_dataset(X, t, {}), cfg);
      },
      py::arg("X"), py::arg("t"), py::arg("h"), py::arg("prune_threshold") = 1e6,
      py::arg("max_iters") = 500, py::arg("max_fp_iters") = 50,
      py::arg("hessian") = "exact", py::arg("update_relevance") = true);

  m.def(
      "w_step",
      [](const DenseMatrix& X, const DenseVector& t, const DenseVector& a, double h,
         std::optional<DenseVector> w_init) {
        return w_step(X, t, a, h, w_init.value_or(DenseVector::Zero(X.cols())),
                      McrArdConfig{});
      },
      py::arg("X"), py::arg("t"), py::arg("a"), py::arg("h"), py::arg("w_init") = py::none());

  m.def("penalized_correntropy", &penalized_correntropy, py::arg("X"), py::arg("t"),
        py::arg("w"), py::arg("a"), py::arg("h"));

  m.def(
      "train",
      [](const DenseMatrix& X, const DenseVector& t, const std::string& algorithm,
         std::optional<double> h, std::vector<std::string> feature_names, bool standardize,
         bool intercept, double grid_lo, double grid_hi, int grid_n, int folds,
         std::uint64_t seed, const std::string& metric, int jobs) {
        PipelineOptions opts;
        opts.algorithm = parse_algorithm(algorithm);
        opts.standardize = standardize;
        opts.intercept = intercept;
        opts.bandwidth.fixed_h = h;
        opts.bandwidth.grid = {grid_lo, grid_hi, grid_n};
        opts.bandwidth.cv = {folds, seed, parse_metric(metric)};
        opts.jobs = jobs;
        py::gil_scoped_release release;
        return train_model(make_dataset(X, t, std::move(feature_names)), opts);
      },
      py::arg("X"), py::arg("t"), py::arg("algorithm") = "mcr-ard", py::arg("h") = py::none(),
      py::arg("feature_names") = std::vector<std::string>{}, py::arg("standardize") = true,
      py::arg("intercept") = false, py::arg("grid_lo") = 1.0, py::arg("grid_hi") = 1000.0,
      py::arg("grid_n") = 30, py::arg("folds") = 5, py::arg("seed") = 0,
      py::arg("metric") = "correlation", py::arg("jobs") = 1);

  m.def(
      "select_bandwidth",
      [](const DenseMatrix& X, const DenseVector& t, double lo, double hi, int n_points,
         int folds, std::uint64_t seed, const std::string& metric, int jobs) {
        BandwidthSelection sel;
        {
          py::gil_scoped_release release;
          sel = select_bandwidth(make_dataset(X, t, {}), {lo, hi, n_points},
                                 {folds, seed, parse_metric(metric)}, McrArdConfig{}, jobs);
        }
        return py::make_tuple(sel.h_best, cv_table(sel.table));
      },
      py::arg("X"), py::arg("t"), py::arg("lo") = 1.0, py::arg("hi") = 1000.0,
      py::arg("n_points") = 30, py::arg("folds") = 5, py::arg("seed") = 0,
      py::arg("metric") = "correlation", py::arg("jobs") = 1);

  m.def(
      "grid_points",
      [](double lo, double hi, int n_points) { return grid_points({lo, hi, n_points}); },
      py::arg("lo") = 1.0, py::arg("hi") = 1000.0, py::arg("n_points") = 30);

  m.def(
      "generate_synthetic",
      [](Eigen::Index n_train, Eigen::Index n_test, Eigen::Index dim, Eigen::Index n_relevant,
         std::uint64_t seed) {
        const SyntheticData s = generate({n_train, n_test, dim, n_relevant, seed});
        py::dict out;
        out["X_train"] = s.train.X;
        out["t_train"] = s.train.t;
        out["X_test"] = s.test.X;
        out["t_test"] = s.test.t;
        out["w_true"] = s.w_true;
        out["relevant"] = s.relevant;
        return out;
      },
      py::arg("n_train") = 300, py::arg("n_test") = 300, py::arg("dim") = 500,
      py::arg("n_relevant") = 30, py::arg("seed") = 0);

  m.def(
      "corrupt_covariates",
      [](const DenseMatrix& X, double proportion, double scale, std::uint64_t seed) {
        Dataset d{X, DenseVector::Zero(X.rows()), {}};
        return corrupt_covariates(d, {proportion, scale, seed}).X;
      },
      py::arg("X"), py::arg("proportion"), py::arg("scale"), py::arg("seed"));

  m.def(
      "build_lagged_design",
      [](const DenseMatrix& series, const DenseVector& target, int n_lags, int stride) {
        Dataset d = build_lagged_design(series, target, {n_lags, stride});
        return py::make_tuple(d.X, d.t, d.feature_names);
      },
      py::arg("series"), py::arg("target"), py::arg("n_lags") = 21, py::arg("stride") = 1);

  m.def(
      "normalize_target_01",
      [](const DenseVector& t) {
        auto [u, s] = normalize_target_01(t);
        return py::make_tuple(u, s.min, s.max);
      },
      py::arg("t"));

  m.def("correlation", &correlation, py::arg("pred"), py::arg("truth"));
  m.def("rmse", &rmse, py::arg("pred"), py::arg("truth"));
  m.def("selection_recall", &selection_recall, py::arg("selected"), py::arg("relevant"));
  m.def("source_contribution", &source_contribution, py::arg("weights"),
        py::arg("n_sources"), py::arg("n_lags"));
  m.def("top_k_sources", &top_k_sources, py::arg("contribution"), py::arg("k"));
}
