#include "corrard/model_io.hpp"

#include <fstream>

namespace corrard {

namespace {

using nlohmann::json;

json to_array(const DenseVector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

DenseVector from_array(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const DenseVector>(values.data(),
                                       static_cast<Eigen::Index>(values.size()));
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json model_to_json(const TrainedModel& model) {
  const FittedModel& fit = model.fit;
  json doc;
  doc["format"] = "corrard-model";
  doc["version"] = 1;
  doc["algorithm"] = to_string(fit.algorithm);
  doc["feature_names"] = model.feature_names;
  doc["weights"] = to_array(model.original_weights());
  doc["intercept"] = model.original_intercept();
  doc["weights_standardized"] = to_array(fit.weights);
  std::vector<Eigen::Index> active = fit.active_indices();
  doc["active_indices"] = active;
  doc["relevance"] = to_array(fit.relevance);
  doc["bandwidth"] = optional_number(fit.bandwidth);
  doc["noise_variance"] = optional_number(fit.noise_variance);
  doc["n_iters"] = fit.n_iters;
  doc["converged"] = fit.converged;
  doc["n_hessian_safeguards"] = fit.n_hessian_safeguards;
  doc["objective_trace"] = fit.objective_trace;
  doc["standardization"] = {{"enabled", model.standardized},
                            {"means", to_array(model.params.means)},
                            {"scales", to_array(model.params.scales)}};
  doc["target_offset"] = model.target_offset;
  doc["fit_intercept"] = model.intercept;
  return doc;
}

TrainedModel model_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "corrard-model") {
      throw InputError("not a corrard model document");
    }
    TrainedModel model;
    FittedModel& fit = model.fit;
    fit.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    fit.weights = from_array(doc.at("weights_standardized"));
    fit.active_mask.assign(static_cast<std::size_t>(fit.weights.size()), false);
    for (auto d : doc.at("active_indices").get<std::vector<Eigen::Index>>()) {
      if (d < 0 || d >= fit.weights.size()) throw InputError("active index out of range");
      fit.active_mask[static_cast<std::size_t>(d)] = true;
    }
    fit.relevance = from_array(doc.at("relevance"));
    if (!doc.at("bandwidth").is_null()) fit.bandwidth = doc["bandwidth"].get<double>();
    if (!doc.at("noise_variance").is_null()) {
      fit.noise_variance = doc["noise_variance"].get<double>();
    }
    fit.n_iters = doc.at("n_iters").get<int>();
    fit.converged = doc.at("converged").get<bool>();
    fit.n_hessian_safeguards = doc.value("n_hessian_safeguards", 0);
    fit.objective_trace = doc.at("objective_trace").get<std::vector<double>>();
    const json& st = doc.at("standardization");
    model.standardized = st.at("enabled").get<bool>();
    model.params.means = from_array(st.at("means"));
    model.params.scales = from_array(st.at("scales"));
    model.target_offset = doc.at("target_offset").get<double>();
    model.intercept = doc.at("fit_intercept").get<bool>();
    const Eigen::Index expected = model.params.means.size() + (model.intercept ? 1 : 0);
    if (fit.weights.size() != expected || model.params.scales.size() != model.params.means.size()) {
      throw InputError("model document has inconsistent dimensions");
    }
    if (!model.feature_names.empty() &&
        static_cast<Eigen::Index>(model.feature_names.size()) != model.params.means.size()) {
      throw InputError("model document has inconsistent feature names");
    }
    return model;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << model_to_json(model).dump(2) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace corrard
