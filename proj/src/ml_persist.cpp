#include "mlq/ml_persist.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mlq::ml {

namespace {

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::CorruptModelFile, "corrupt model file: " + why); }

std::vector<double> number_array(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) corrupt(std::string(what) + " is not an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) corrupt(std::string(what) + " holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

TrainedModel parse_model_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    corrupt(e.what());
  }
  if (!doc.is_object()) corrupt("top level is not an object");
  if (!doc.contains("version") || !doc["version"].is_number_integer()) corrupt("missing version");
  const int version = doc["version"].get<int>();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "unsupported model format version " + std::to_string(version));
  }

  TrainedModel model;
  model.version = version;
  try {
    const auto algo = doc.at("algorithm").get<std::string>();
    for (const auto& name : doc.at("featureNames")) model.featureNames.push_back(name.get<std::string>());
    model.labelName = doc.at("labelName").get<std::string>();
    model.trainedOnRows = doc.at("trainedOnRows").get<std::size_t>();
    const auto& params = doc.at("params");
    if (algo == "linear_regression") {
      model.algorithm = {AlgorithmKind::LinearRegression, 0};
      model.weights = number_array(params.at("weights"), "weights");
      if (!params.at("intercept").is_number()) corrupt("intercept is not a number");
      model.intercept = params.at("intercept").get<double>();
      if (model.weights.size() != model.featureNames.size()) corrupt("weight count differs from feature count");
    } else if (algo == "knn") {
      model.algorithm = {AlgorithmKind::KnnRegression, doc.at("k").get<int>()};
      if (model.algorithm.k < 1) corrupt("k must be positive");
      for (const auto& row : params.at("samples")) {
        const auto values = number_array(row, "sample");
        if (values.size() != model.sampleWidth()) corrupt("sample width differs from feature count + 1");
        model.samples.insert(model.samples.end(), values.begin(), values.end());
      }
    } else {
      corrupt("unknown algorithm '" + algo + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
  return model;
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::PersistenceIO, "cannot read model file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_text(ss.str());
}

}  // namespace mlq::ml
