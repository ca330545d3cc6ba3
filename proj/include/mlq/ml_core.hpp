#pragma once

// Self-contained learners for data-analytics blocks: CSV ingestion, ordinary
// least squares and k-NN regression, observation buffering and model
// serialization. Generated projects embed this file and ml_core.cpp
// unchanged, so both sides share the same numeric procedures.

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlq::ml {

/// Ridge term added to the diagonal of the normal equations.
inline constexpr double kRidgeLambda = 1e-9;

/// Current model file format.
inline constexpr int kModelFormatVersion = 1;

enum class ErrorCode {
  DatasetNotFound,
  MissingColumn,
  NonNumericCell,
  EmptyTrainingSet,
  SingularSystem,
  ArityMismatch,
  PersistenceIO,
  UnsupportedVersion,
  CorruptModelFile,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class AlgorithmKind { LinearRegression, KnnRegression };

struct Algorithm {
  AlgorithmKind kind = AlgorithmKind::LinearRegression;
  int k = 0;  // KnnRegression only

  friend bool operator==(const Algorithm&, const Algorithm&) = default;
};

struct TrainSpec {
  std::vector<std::string> features;
  std::string label;
  Algorithm algorithm;
};

/// Dense row-major table holding the requested columns of a CSV file.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> columns, std::vector<double> values, std::string sourcePath);

  const std::vector<std::string>& columnNames() const { return columns_; }
  std::size_t rows() const { return columns_.empty() ? 0 : values_.size() / columns_.size(); }
  std::size_t cols() const { return columns_.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * columns_.size(), columns_.size()};
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * columns_.size() + c]; }
  const std::string& sourcePath() const { return sourcePath_; }

 private:
  std::vector<std::string> columns_;
  std::vector<double> values_;
  std::string sourcePath_;
};

/// Reads `path` and keeps `requiredColumns` in the requested order.
Dataset load_dataset(const std::filesystem::path& path, const std::vector<std::string>& requiredColumns);

/// Same as load_dataset over in-memory CSV text.
Dataset parse_dataset(std::string_view text, const std::vector<std::string>& requiredColumns,
                      std::string sourcePath = {});

/// Splits the header line of a CSV document into trimmed column names.
std::vector<std::string> parse_csv_header(std::string_view text);

struct Observation {
  std::vector<double> features;
  double label = 0.0;
};

struct ObservationBuffer {
  std::string daName;
  std::size_t featureCount = 0;
  std::vector<Observation> rows;
};

/// Appends one labeled sample. Throws ArityMismatch when the feature vector
/// does not match the buffer width.
void observe(ObservationBuffer& buffer, std::span<const double> features, double label);

struct TrainedModel {
  Algorithm algorithm;
  std::vector<std::string> featureNames;
  std::string labelName;
  std::vector<double> weights;  // LinearRegression
  double intercept = 0.0;       // LinearRegression
  std::vector<double> samples;  // KnnRegression, row-major, width featureNames.size() + 1
  std::size_t trainedOnRows = 0;
  int version = kModelFormatVersion;

  std::size_t sampleWidth() const { return featureNames.size() + 1; }
  std::size_t sampleCount() const {
    return sampleWidth() == 0 ? 0 : samples.size() / sampleWidth();
  }

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

/// Trains on dataset rows followed by buffer rows. The dataset columns must be
/// `spec.features` followed by `spec.label` (the order load_dataset produces).
TrainedModel train(const TrainSpec& spec, const Dataset& dataset, const ObservationBuffer& buffer);

double predict(const TrainedModel& model, std::span<const double> features);

/// Solves `a * x = b` for a square row-major `a` by Gaussian elimination with
/// partial pivoting. Throws SingularSystem on a zero or non-finite pivot.
std::vector<double> solve_linear_system(std::vector<double> a, std::vector<double> b);

/// Renders the model file document. Numbers use the shortest decimal form
/// that parses back to the identical double.
std::string to_model_text(const TrainedModel& model);

void save_model(const TrainedModel& model, const std::filesystem::path& path);

/// Shortest round-trip decimal for a finite double.
std::string format_shortest(double v);

}  // namespace mlq::ml
