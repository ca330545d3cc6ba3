#include "mlq/ml_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

namespace mlq::ml {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DatasetNotFound: return "DatasetNotFound";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::PersistenceIO: return "PersistenceIO";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CorruptModelFile: return "CorruptModelFile";
  }
  return "Unknown";
}

Dataset::Dataset(std::vector<std::string> columns, std::vector<double> values, std::string sourcePath)
    : columns_(std::move(columns)), values_(std::move(values)), sourcePath_(std::move(sourcePath)) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::vector<std::string> parse_csv_header(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) return {};
  std::vector<std::string> names;
  for (auto cell : split_cells(lines.front())) names.emplace_back(cell);
  if (!names.empty() && names.front().starts_with("\xEF\xBB\xBF")) names.front().erase(0, 3);
  return names;
}

Dataset parse_dataset(std::string_view text, const std::vector<std::string>& requiredColumns,
                      std::string sourcePath) {
  const auto header = parse_csv_header(text);
  std::vector<std::size_t> picks;
  for (const auto& name : requiredColumns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "missing column '" + name + "'");
    picks.push_back(static_cast<std::size_t>(it - header.begin()));
  }

  const auto lines = split_lines(text);
  std::vector<double> values;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto cells = split_cells(lines[li]);
    for (std::size_t c = 0; c < picks.size(); ++c) {
      double v = 0.0;
      const auto col = picks[c];
      if (col >= cells.size() || !parse_double(cells[col], v)) {
        throw Error(ErrorCode::NonNumericCell, "non-numeric cell at row " + std::to_string(li + 1) +
                                                   ", column '" + requiredColumns[c] + "'");
      }
      values.push_back(v);
    }
  }
  return Dataset(requiredColumns, std::move(values), std::move(sourcePath));
}

Dataset load_dataset(const std::filesystem::path& path, const std::vector<std::string>& requiredColumns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::DatasetNotFound, "dataset not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), requiredColumns, path.string());
}

void observe(ObservationBuffer& buffer, std::span<const double> features, double label) {
  if (features.size() != buffer.featureCount) {
    throw Error(ErrorCode::ArityMismatch, "observation for '" + buffer.daName + "' has " +
                                              std::to_string(features.size()) + " features, expected " +
                                              std::to_string(buffer.featureCount));
  }
  buffer.rows.push_back({std::vector<double>(features.begin(), features.end()), label});
}

std::vector<double> solve_linear_system(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r * n + col]) > std::fabs(a[pivot * n + col])) pivot = r;
    }
    const double p = a[pivot * n + col];
    if (p == 0.0 || !std::isfinite(p)) throw Error(ErrorCode::SingularSystem, "singular normal equations");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

namespace {

// Visits every training row: dataset rows first, then buffered rows.
template <typename F>
void for_each_training_row(const Dataset& dataset, const ObservationBuffer& buffer, std::size_t m, F&& f) {
  std::vector<double> row(m);
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    for (std::size_t c = 0; c < m; ++c) row[c] = dataset.at(r, c);
    f(std::span<const double>(row), dataset.at(r, m));
  }
  for (const auto& obs : buffer.rows) f(std::span<const double>(obs.features), obs.label);
}

}  // namespace

TrainedModel train(const TrainSpec& spec, const Dataset& dataset, const ObservationBuffer& buffer) {
  const std::size_t m = spec.features.size();
  if (dataset.rows() > 0 && dataset.cols() != m + 1) {
    throw Error(ErrorCode::ArityMismatch, "dataset has " + std::to_string(dataset.cols()) +
                                              " columns, expected " + std::to_string(m + 1));
  }
  if (buffer.featureCount != m && !buffer.rows.empty()) {
    throw Error(ErrorCode::ArityMismatch, "observation buffer width does not match features");
  }
  const std::size_t n = dataset.rows() + buffer.rows.size();
  if (n == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");

  TrainedModel model;
  model.algorithm = spec.algorithm;
  model.featureNames = spec.features;
  model.labelName = spec.label;
  model.trainedOnRows = n;

  if (spec.algorithm.kind == AlgorithmKind::KnnRegression) {
    model.samples.reserve(n * (m + 1));
    for_each_training_row(dataset, buffer, m, [&](std::span<const double> x, double y) {
      model.samples.insert(model.samples.end(), x.begin(), x.end());
      model.samples.push_back(y);
    });
    return model;
  }

  // Normal equations over [X | 1].
  const std::size_t d = m + 1;
  std::vector<double> gram(d * d, 0.0);
  std::vector<double> rhs(d, 0.0);
  std::vector<double> aug(d, 1.0);
  for_each_training_row(dataset, buffer, m, [&](std::span<const double> x, double y) {
    std::copy(x.begin(), x.end(), aug.begin());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) gram[i * d + j] += aug[i] * aug[j];
      rhs[i] += aug[i] * y;
    }
  });
  for (std::size_t i = 0; i < d; ++i) gram[i * d + i] += kRidgeLambda;

  auto solution = solve_linear_system(std::move(gram), std::move(rhs));
  model.intercept = solution.back();
  solution.pop_back();
  model.weights = std::move(solution);
  return model;
}

double predict(const TrainedModel& model, std::span<const double> features) {
  const std::size_t m = model.featureNames.size();
  if (features.size() != m) {
    throw Error(ErrorCode::ArityMismatch, "prediction input has " + std::to_string(features.size()) +
                                              " features, expected " + std::to_string(m));
  }
  if (model.algorithm.kind == AlgorithmKind::LinearRegression) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += model.weights[i] * features[i];
    return acc + model.intercept;
  }

  const std::size_t width = model.sampleWidth();
  const std::size_t count = model.sampleCount();
  std::vector<std::pair<double, std::size_t>> dist(count);
  for (std::size_t s = 0; s < count; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double diff = model.samples[s * width + i] - features[i];
      acc += diff * diff;
    }
    dist[s] = {acc, s};
  }
  // Squared distance orders the same as Euclidean; pair ordering breaks ties
  // by stored-row index.
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(model.algorithm.k, 1)), count);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += model.samples[dist[i].second * width + m];
  return sum / static_cast<double>(k);
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_numbers(std::span<const double> xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_shortest(xs[i]);
  }
  return out + "]";
}

}  // namespace

std::string to_model_text(const TrainedModel& model) {
  std::ostringstream os;
  const bool knn = model.algorithm.kind == AlgorithmKind::KnnRegression;
  os << "{\n";
  os << "  \"version\": " << model.version << ",\n";
  os << "  \"algorithm\": " << (knn ? "\"knn\"" : "\"linear_regression\"") << ",\n";
  if (knn) os << "  \"k\": " << model.algorithm.k << ",\n";
  os << "  \"featureNames\": [";
  for (std::size_t i = 0; i < model.featureNames.size(); ++i) {
    os << (i ? ", " : "") << json_string(model.featureNames[i]);
  }
  os << "],\n";
  os << "  \"labelName\": " << json_string(model.labelName) << ",\n";
  os << "  \"trainedOnRows\": " << model.trainedOnRows << ",\n";
  os << "  \"params\": {\n";
  if (knn) {
    os << "    \"samples\": [";
    const std::size_t w = model.sampleWidth();
    for (std::size_t s = 0; s < model.sampleCount(); ++s) {
      os << (s ? ",\n      " : "\n      ")
         << json_numbers(std::span<const double>(model.samples).subspan(s * w, w));
    }
    os << (model.sampleCount() ? "\n    ]\n" : "]\n");
  } else {
    os << "    \"weights\": " << json_numbers(model.weights) << ",\n";
    os << "    \"intercept\": " << format_shortest(model.intercept) << "\n";
  }
  os << "  }\n";
  os << "}\n";
  return os.str();
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::PersistenceIO, "cannot write model file: " + path.string());
  out << to_model_text(model);
  out.flush();
  if (!out) throw Error(ErrorCode::PersistenceIO, "failed writing model file: " + path.string());
}

}  // namespace mlq::ml
