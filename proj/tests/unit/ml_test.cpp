#include <random>

#include "mlq/ml_core.hpp"
#include "mlq/ml_persist.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mlq::ml;

namespace {

struct Table {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
};

Dataset to_dataset(const Table& t) {
  const std::size_t m = t.x.empty() ? 0 : t.x[0].size();
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < m; ++i) cols.push_back("f" + std::to_string(i));
  cols.push_back("y");
  std::vector<double> values;
  for (std::size_t r = 0; r < t.x.size(); ++r) {
    values.insert(values.end(), t.x[r].begin(), t.x[r].end());
    values.push_back(t.y[r]);
  }
  return Dataset(cols, values, "mem");
}

TrainSpec spec_for(std::size_t m, Algorithm algo) {
  TrainSpec s;
  for (std::size_t i = 0; i < m; ++i) s.features.push_back("f" + std::to_string(i));
  s.label = "y";
  s.algorithm = algo;
  return s;
}

constexpr long double kRidge = 1e-9L;

// Entries uniform in [-10, 10], labels included.
Table uniform_table(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Table t;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(m);
    for (auto& v : row) v = u(rng);
    t.x.push_back(row);
    t.y.push_back(u(rng));
  }
  return t;
}

// Labels follow a random linear relation plus small noise.
Table random_table(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Table t;
  std::vector<double> w(m);
  for (auto& v : w) v = u(rng);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(m);
    double label = u(rng) * 0.1;
    for (std::size_t i = 0; i < m; ++i) {
      row[i] = u(rng);
      label += w[i] * row[i];
    }
    t.x.push_back(row);
    t.y.push_back(label);
  }
  return t;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no ml::Error thrown");
  return ErrorCode::CorruptModelFile;
}

const ObservationBuffer kEmpty{};

}  // namespace

TEST_CASE("ols matches the normal-equations oracle on random data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::size_t n = 5 + rng() % 46;
    const auto t = trial % 2 ? uniform_table(rng, n, m) : random_table(rng, n, m);
    const auto want = oracle::ols(t.x, t.y, kRidge);
    REQUIRE(want);
    const auto got = train(spec_for(m, {}), to_dataset(t), kEmpty);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::fabs(got.weights[i] - (*want)[i]) < 1e-9L);
    CHECK(std::fabs(got.intercept - (*want)[m]) < 1e-9L);
    CHECK(got.trainedOnRows == n);
  }
}

TEST_CASE("the ridge term stays within 1e-6 of exact least squares") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const auto t = uniform_table(rng, 5 + rng() % 46, m);
    const auto exact = oracle::ols(t.x, t.y);
    REQUIRE(exact);
    const auto got = train(spec_for(m, {}), to_dataset(t), kEmpty);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::fabs(got.weights[i] - (*exact)[i]) < 1e-6L);
    CHECK(std::fabs(got.intercept - (*exact)[m]) < 1e-6L);
  }
}

TEST_CASE("ols recovers an exact linear relation") {
  Table t;
  for (int h = 0; h < 24; ++h) {
    const double temp = 10.0 + (h * 7 % 11) * 0.5;
    t.x.push_back({double(h), temp});
    t.y.push_back(3.0 * h + 0.5 * temp + 10.0);
  }
  const auto model = train(spec_for(2, {}), to_dataset(t), kEmpty);
  CHECK(model.weights[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(model.weights[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(model.intercept == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("retraining uses dataset rows followed by buffered observations") {
  std::mt19937_64 rng(5);
  auto t = random_table(rng, 12, 2);
  ObservationBuffer buf{"d", 2, {}};
  // An outlier that breaks the previous fit.
  const std::vector<double> f{9.0, -9.0};
  observe(buf, f, 500.0);
  const auto before = train(spec_for(2, {}), to_dataset(t), kEmpty);
  const auto after = train(spec_for(2, {}), to_dataset(t), buf);
  CHECK(after.trainedOnRows == t.x.size() + buf.rows.size());
  t.x.push_back(f);
  t.y.push_back(500.0);
  const auto want = oracle::ols(t.x, t.y, kRidge);
  REQUIRE(want);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(after.weights[i] - (*want)[i]) < 1e-9L);
  CHECK(std::fabs(after.intercept - (*want)[2]) < 1e-9L);
  CHECK(after.weights != before.weights);
}

TEST_CASE("training on the buffer alone") {
  ObservationBuffer buf{"d", 1, {}};
  for (int i = 0; i < 4; ++i) {
    const double x = i;
    observe(buf, std::span<const double>(&x, 1), 2.0 * i + 1.0);
  }
  const auto model = train(spec_for(1, {}), Dataset{}, buf);
  CHECK(model.trainedOnRows == 4);
  const double q = 10.0;
  CHECK(predict(model, std::span<const double>(&q, 1)) == doctest::Approx(21.0).epsilon(1e-9));
}

TEST_CASE("knn matches exhaustive search, ties broken by row index") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(-3, 3);
  std::uniform_real_distribution<double> label(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng() % 3;
    const int k = 1 + static_cast<int>(rng() % 7);
    Table t;
    // Small integer grid: many exact distance ties.
    for (int r = 0; r < 50; ++r) {
      std::vector<double> row(m);
      for (auto& v : row) v = coord(rng);
      t.x.push_back(row);
      t.y.push_back(label(rng));
    }
    const auto model = train(spec_for(m, {AlgorithmKind::KnnRegression, k}), to_dataset(t), kEmpty);
    CHECK(model.sampleCount() == 50);
    for (int q = 0; q < 20; ++q) {
      std::vector<double> query(m);
      for (auto& v : query) v = coord(rng) + (q % 2 ? 0.5 : 0.0);
      const double got = predict(model, query);
      CHECK(std::fabs(got - oracle::knn(t.x, t.y, query, static_cast<std::size_t>(k))) < 1e-9L);
    }
  }
}

TEST_CASE("knn tie breaking picks the earlier row") {
  Table t;
  t.x = {{1.0}, {-1.0}, {1.0}, {5.0}};
  t.y = {10.0, 20.0, 30.0, 40.0};
  const auto model = train(spec_for(1, {AlgorithmKind::KnnRegression, 1}), to_dataset(t), kEmpty);
  const double q = 0.0;
  CHECK(predict(model, std::span<const double>(&q, 1)) == 10.0);
  auto two = model;
  two.algorithm.k = 2;
  CHECK(predict(two, std::span<const double>(&q, 1)) == 15.0);
  auto many = model;
  many.algorithm.k = 10;
  CHECK(predict(many, std::span<const double>(&q, 1)) == 25.0);
}

TEST_CASE("dataset loading") {
  const auto ds = parse_dataset("a, b,c\r\n1,2,3\r\n\r\n4,5,6e1\n", {"c", "a"}, "x.csv");
  REQUIRE(ds.rows() == 2);
  CHECK(ds.columnNames() == std::vector<std::string>{"c", "a"});
  CHECK(ds.at(0, 0) == 3.0);
  CHECK(ds.at(1, 0) == 60.0);
  CHECK(ds.at(1, 1) == 4.0);

  CHECK(code_of([] { parse_dataset("a,b\n1,2\n", {"z"}); }) == ErrorCode::MissingColumn);
  CHECK(code_of([] { parse_dataset("a,b\n1,x\n", {"b"}); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([] { parse_dataset("a,b\n1\n", {"b"}); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([] { parse_dataset("a\nnan\n", {"a"}); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([] { load_dataset("/nonexistent/x.csv", {"a"}); }) == ErrorCode::DatasetNotFound);
  CHECK(parse_csv_header("\xEF\xBB\xBFx,y\n") == std::vector<std::string>{"x", "y"});
}

TEST_CASE("flagship dataset follows the generating formula") {
  const auto ds = load_dataset(test::models_dir() / "data/grid_load.csv", {"hour", "temp", "load"});
  CHECK(ds.rows() == 200);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    CHECK(ds.at(r, 2) == doctest::Approx(3.0 * ds.at(r, 0) + 0.5 * ds.at(r, 1) + 10.0).epsilon(1e-12));
  }
}

TEST_CASE("training and prediction errors") {
  CHECK(code_of([] { train(spec_for(1, {}), Dataset{}, kEmpty); }) == ErrorCode::EmptyTrainingSet);
  Table t;
  t.x = {{1.0}, {1.0}, {1.0}};
  t.y = {1.0, 2.0, 3.0};
  const auto m = train(spec_for(1, {}), to_dataset(t), kEmpty);
  CHECK(code_of([&] { predict(m, std::vector<double>{1.0, 2.0}); }) == ErrorCode::ArityMismatch);
  ObservationBuffer buf{"d", 2, {}};
  CHECK(code_of([&] { observe(buf, std::vector<double>{1.0}, 0.0); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([&] { train(spec_for(2, {}), to_dataset(t), kEmpty); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([] { solve_linear_system({1.0, 2.0, 2.0, 4.0}, {1.0, 2.0}); }) == ErrorCode::SingularSystem);
  const auto x = solve_linear_system({2.0, 1.0, 1.0, 3.0}, {3.0, 5.0});
  CHECK(x[0] == doctest::Approx(0.8));
  CHECK(x[1] == doctest::Approx(1.4));
}

TEST_CASE("constant feature columns are absorbed by the ridge term") {
  Table t;
  t.x = {{1.0}, {1.0}, {1.0}};
  t.y = {1.0, 2.0, 3.0};
  const auto m = train(spec_for(1, {}), to_dataset(t), kEmpty);
  const double q = 1.0;
  CHECK(predict(m, std::span<const double>(&q, 1)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("model files round-trip exactly") {
  std::mt19937_64 rng(9);
  test::TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_table(rng, 10, 3);
    const bool knn = trial % 2 == 1;
    const Algorithm algo = knn ? Algorithm{AlgorithmKind::KnnRegression, 3} : Algorithm{};
    const auto model = train(spec_for(3, algo), to_dataset(t), kEmpty);
    const auto path = dir / ("m" + std::to_string(trial) + "/model.json");
    save_model(model, path);
    const auto back = load_model(path);
    CHECK(back == model);
    for (const auto& row : t.x) CHECK(predict(back, row) == predict(model, row));
    CHECK(to_model_text(back) == to_model_text(model));
  }
}

TEST_CASE("model file errors") {
  Table t;
  t.x = {{1.0}, {2.0}};
  t.y = {1.0, 2.0};
  std::string text = to_model_text(train(spec_for(1, {}), to_dataset(t), kEmpty));
  const auto at = text.find("\"version\": 1");
  REQUIRE(at != std::string::npos);
  std::string v999 = text;
  v999.replace(at, 12, "\"version\": 999");
  CHECK(code_of([&] { parse_model_text(v999); }) == ErrorCode::UnsupportedVersion);
  CHECK(code_of([&] { parse_model_text(text.substr(0, text.size() / 2)); }) == ErrorCode::CorruptModelFile);
  CHECK(code_of([] { parse_model_text("[]"); }) == ErrorCode::CorruptModelFile);
  CHECK(code_of([] { parse_model_text(R"({"version": 1})"); }) == ErrorCode::CorruptModelFile);
  std::string badAlgo = text;
  badAlgo.replace(badAlgo.find("linear_regression"), 17, "svm");
  CHECK(code_of([&] { parse_model_text(badAlgo); }) == ErrorCode::CorruptModelFile);
  CHECK(code_of([] { load_model("/nonexistent/model.json"); }) == ErrorCode::PersistenceIO);
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(std::stod(format_shortest(1.0 / 3.0)) == 1.0 / 3.0);
}
