#include <map>
#include <regex>

#include "support.hpp"

using namespace mlq;
using test::codes;
using test::parse_ok;

namespace {

class FakeDatasets : public DatasetAccess {
 public:
  FakeDatasets(std::map<std::string, std::vector<std::string>> headers, bool reportMissing)
      : headers_(std::move(headers)), reportMissing_(reportMissing) {}

  std::optional<std::vector<std::string>> header(std::string_view path) const override {
    const auto it = headers_.find(std::string(path));
    if (it == headers_.end()) return std::nullopt;
    return it->second;
  }
  bool report_missing() const override { return reportMissing_; }

 private:
  std::map<std::string, std::vector<std::string>> headers_;
  bool reportMissing_;
};

ValidationReport check(const std::string& src, const DatasetAccess* ds = nullptr) {
  return validate(parse_ok(src), ds);
}

std::string body(const std::string& decls, const std::string& entry) {
  return "thing A {\n" + decls + "  statechart init S {\n    state S {\n      on entry {\n" + entry +
         "\n      }\n    }\n  }\n}\n";
}

const char* kDa = R"(thing A {
  property y : Real = 0.0
  data_analytics d {
    dataset "d.csv"
    features a, b
    label c
    model knn(0)
    save_to "m.json"
  }
  statechart init S {
    state S {
      on entry {
        da_predict d -> y (1.0)
        da_observe d (1.0, 2.0, 3.0 ; 4.0)
        da_predict d -> y (1.0, true)
      }
    }
  }
}
)";

}  // namespace

TEST_CASE("every corpus model is valid with its datasets") {
  const DirectoryDatasetAccess ds(test::models_dir());
  for (const auto& p : test::sources_in(test::models_dir())) {
    INFO(p.string());
    const auto r = validate(parse_ok(test::slurp(p)), &ds);
    for (const auto& d : r.diagnostics) INFO(format_diagnostic(d));
    CHECK(r.valid);
    CHECK(r.diagnostics.empty());
  }
}

TEST_CASE("each seeded fixture produces exactly its code at the expected line") {
  const DirectoryDatasetAccess ds(test::models_dir());
  const std::regex header(R"(// expect: ([A-Z]{3}\d{3}) line (\d+))");
  int checked = 0;
  for (const auto& p : test::sources_in(test::errors_dir())) {
    const auto src = test::slurp(p);
    std::smatch m;
    REQUIRE(std::regex_search(src, m, header));
    const auto a = analyze(src, p.filename().string(), &ds);
    INFO(p.string());
    REQUIRE(a.diagnostics.size() == 1);
    CHECK(a.diagnostics[0].code == m[1].str());
    CHECK(a.diagnostics[0].line == std::stoi(m[2].str()));
    CHECK(a.valid() == (a.diagnostics[0].severity == Severity::Warning));
    ++checked;
  }
  CHECK(checked == 15);
}

TEST_CASE("all checks run and diagnostics are ordered by position") {
  const auto r = check(body("  property b : Bool = 1\n", "        b = 2.0\n        print nope\n        x = 1"));
  CHECK_FALSE(r.valid);
  CHECK(codes(r.diagnostics) == std::vector<std::string>{"VAL003", "VAL003", "VAL001", "VAL001"});
  for (std::size_t i = 1; i < r.diagnostics.size(); ++i) {
    const auto& a = r.diagnostics[i - 1];
    const auto& b = r.diagnostics[i];
    CHECK((a.line < b.line || (a.line == b.line && a.col <= b.col)));
  }
}

TEST_CASE("arithmetic typing") {
  CHECK(check(body("  property r : Real = 0.0\n", "        r = 1 / 2")).valid);
  CHECK(codes(check(body("  property i : Int = 0\n", "        i = 1 / 2")).diagnostics) ==
        std::vector<std::string>{"VAL003"});
  CHECK(check(body("  property r : Real = 0.0\n", "        r = 1 + 2.5 * 2")).valid);
  CHECK(check(body("  property r : Real = 0.0\n", "        r = 3")).valid);
  CHECK_FALSE(check(body("", "        print \"a\" + 1")).valid);
  CHECK_FALSE(check(body("", "        print not 1")).valid);
  CHECK_FALSE(check(body("", "        print -true")).valid);
  CHECK_FALSE(check(body("", "        print 1 and true")).valid);
  CHECK(check(body("", "        print \"a\" == \"b\"")).valid);
  CHECK(check(body("", "        print 1 == 1.0")).valid);
  CHECK_FALSE(check(body("", "        print \"a\" < \"b\"")).valid);
  CHECK_FALSE(check(body("", "        print true == 1")).valid);
  CHECK_FALSE(check(body("", "        if 1 then\n          print 1\n        end")).valid);
  CHECK_FALSE(check(body("", "        var s : String = 1")).valid);
}

TEST_CASE("type_of widens and divides to Real") {
  const auto m = resolve_references(parse_ok(body("  property i : Int = 0\n  property r : Real = 0.0\n",
                                                  "        print i / i\n        print i + r\n        print i * i"
                                                  "\n        print i < r")))
                     .resolved;
  REQUIRE(m);
  const auto& t = m->model.things[0];
  const TypeScope scope{&t, nullptr, {}};
  const auto& acts = t.statechart.states[0].entryActions;
  CHECK(type_of(*acts[0].value, scope) == DType::Real);
  CHECK(type_of(*acts[1].value, scope) == DType::Real);
  CHECK(type_of(*acts[2].value, scope) == DType::Int);
  CHECK(type_of(*acts[3].value, scope) == DType::Bool);
}

TEST_CASE("property initializers must match the declared type") {
  CHECK(codes(check(body("  property s : String = 1\n", "")).diagnostics) == std::vector<std::string>{"VAL003"});
  CHECK(codes(check(body("  property r : Real = 1\n", "")).diagnostics) == std::vector<std::string>{"VAL003"});
}

TEST_CASE("message parameters are read-only") {
  const auto r = check(R"(thing A {
  message m(x : Int)
  provided port p {
    receives m
  }
  statechart init S {
    state S {
      transition -> S event p?m action {
        x = 1
      }
    }
  }
}
)");
  CHECK(codes(r.diagnostics) == std::vector<std::string>{"VAL003"});
}

TEST_CASE("send arity and argument types") {
  const std::string decls =
      "  message m(x : Int, y : Real)\n  required port out {\n    sends m\n  }\n";
  CHECK(check(body(decls, "        out!m(1, 2)")).valid);
  CHECK(codes(check(body(decls, "        out!m(1)")).diagnostics) == std::vector<std::string>{"VAL004"});
  CHECK(codes(check(body(decls, "        out!m(1.5, 2.0)")).diagnostics) == std::vector<std::string>{"VAL004"});
}

TEST_CASE("analytics arity and k") {
  const auto r = check(kDa);
  CHECK(codes(r.diagnostics) == std::vector<std::string>{"VAL010", "VAL009", "VAL009", "VAL003"});
}

TEST_CASE("guards must be Bool and after needs a positive delay") {
  const auto r = check(R"(thing A {
  statechart init S {
    state S {
      transition -> S event after(0) guard 1
    }
  }
}
)");
  CHECK(codes(r.diagnostics) == std::vector<std::string>{"VAL010", "VAL008"});
}

TEST_CASE("unreachable states are warnings only") {
  const auto r = check(R"(thing A {
  statechart init S {
    state S {
      transition -> T event after(1)
    }
    state T {
    }
    state U {
      transition -> S event after(1)
    }
    state V {
      transition -> V event after(1)
    }
  }
}
)");
  CHECK(r.valid);
  REQUIRE(r.diagnostics.size() == 2);
  for (const auto& d : r.diagnostics) {
    CHECK(d.code == "VAL005");
    CHECK(d.severity == Severity::Warning);
  }
  CHECK(r.diagnostics[0].line == 8);
  CHECK(r.diagnostics[1].line == 11);
}

TEST_CASE("connectors") {
  const std::string things = R"(thing A {
  message m(x : Int)
  message n()
  provided port p {
    receives m
    sends n
  }
  required port q {
    receives n
    sends m
  }
  statechart init S {
    state S {
    }
  }
}
thing B {
  message m(x : Real)
  message n()
  required port r {
    receives n
    sends m
  }
  provided port s {
    receives n
  }
  statechart init S {
    state S {
    }
  }
}
)";
  CHECK(check(things + "configuration C {\n  instance a : A\n  instance a2 : A\n  connector a.q <-> a2.p\n}\n").valid);
  // Same kind on both sides.
  CHECK(codes(check(things + "configuration C {\n  instance a : A\n  instance a2 : A\n  connector a.p <-> a2.p\n}\n")
                  .diagnostics) == std::vector<std::string>{"VAL006"});
  // Parameter types differ.
  CHECK(codes(check(things + "configuration C {\n  instance a : A\n  instance b : B\n  connector a.p <-> b.r\n}\n")
                  .diagnostics) == std::vector<std::string>{"VAL006"});
  // Sent message not received.
  CHECK(codes(check(things + "configuration C {\n  instance a : A\n  instance b : B\n  connector b.s <-> a.q\n}\n")
                  .diagnostics) == std::vector<std::string>{"VAL006"});
}

TEST_CASE("dataset columns are checked only when access is supplied") {
  const char* src = R"(thing A {
  data_analytics d {
    dataset "d.csv"
    features a, b
    label c
    model linear_regression
    save_to "m.json"
  }
  statechart init S {
    state S {
    }
  }
}
)";
  CHECK(check(src).valid);
  const FakeDatasets full({{"d.csv", {"c", "b", "a"}}}, true);
  CHECK(check(src, &full).valid);
  const FakeDatasets partial({{"d.csv", {"a", "c"}}}, true);
  const auto r = check(src, &partial);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "VAL007");
  CHECK(r.diagnostics[0].line == 4);
  CHECK(r.diagnostics[0].message.find("'b'") != std::string::npos);

  const FakeDatasets none({}, true);
  CHECK(codes(check(src, &none).diagnostics) == std::vector<std::string>{"VAL007"});
  const FakeDatasets lenient({}, false);
  CHECK(check(src, &lenient).valid);
}

TEST_CASE("directory dataset access reads the first line") {
  test::TempDir dir;
  test::spit(dir / "sub/x.csv", "p, q ,r\r\n1,2,3\n");
  const DirectoryDatasetAccess ds(dir.path());
  const auto h = ds.header("sub/x.csv");
  REQUIRE(h);
  CHECK(*h == std::vector<std::string>{"p", "q", "r"});
  CHECK_FALSE(ds.header("nope.csv"));
}

TEST_CASE("flagship is valid and fully bound") {
  const DirectoryDatasetAccess ds(test::models_dir());
  const auto a = analyze(test::slurp(test::models_dir() / "smart-grid-imputation.mlq"), "f.mlq", &ds);
  CHECK(a.diagnostics.empty());
  REQUIRE(a.valid());
  for (const auto& b : a.resolved->bindings) CHECK(b.index >= 0);
}
