#include "support.hpp"

using namespace mlq;
using test::parse_ok;

namespace {

const char* kScopes = R"(thing A {
  property p : Int = 1
  message m(x : Int)
  provided port in {
    receives m
  }
  statechart init S {
    state S {
      on entry {
        var p : Int = p + 1
        print p
      }
      transition -> S event in?m action {
        var y : Int = x
        if y > 0 then
          var z : Int = y
          p = z
        else
          var z : Int = 0
          x = z
        end
      }
    }
  }
}
)";

ResolveResult resolve_src(const std::string& src) { return resolve_references(parse_ok(src)); }

}  // namespace

TEST_CASE("every corpus model resolves fully") {
  for (const auto& p : test::sources_in(test::models_dir())) {
    INFO(p.string());
    const auto r = resolve_src(test::slurp(p));
    CHECK(r.errors.empty());
    REQUIRE(r.resolved);
    CHECK_FALSE(r.resolved->bindings.empty());
  }
}

TEST_CASE("locals shadow properties and params bind by index") {
  const auto r = resolve_src(kScopes);
  REQUIRE(r.resolved);
  const auto& st = r.resolved->model.things[0].statechart.states[0];

  const Action& decl = st.entryActions[0];
  CHECK(decl.ref == RefKind::Local);
  CHECK(decl.slot == 0);
  // The initializer sees the property, not the local being declared.
  CHECK(decl.value->operands[0].ref == RefKind::Property);
  CHECK(st.entryActions[1].value->ref == RefKind::Local);

  const auto& acts = st.transitions[0].actions;
  CHECK(acts[0].value->ref == RefKind::Param);
  CHECK(acts[0].value->slot == 0);
  const Action& branch = acts[1];
  CHECK(branch.thenActions[1].ref == RefKind::Property);
  CHECK(branch.elseActions[1].ref == RefKind::Param);
  // Sibling branches get distinct slots.
  CHECK(branch.thenActions[0].slot != branch.elseActions[0].slot);
}

TEST_CASE("a branch-local variable is not visible after the branch") {
  const auto r = resolve_src(R"(thing A {
  statechart init S {
    state S {
      on entry {
        if true then
          var t : Int = 1
        end
        print t
      }
    }
  }
}
)");
  CHECK_FALSE(r.resolved);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].kind == ResolveError::Kind::UnresolvedReference);
  CHECK(r.errors[0].name == "t");
  CHECK(r.errors[0].loc.line == 8);
}

TEST_CASE("unresolved transition target is reported at the transition") {
  const auto r = resolve_src(R"(thing A {
  statechart init S {
    state S {
      transition -> S9 event after(1)
    }
  }
}
)");
  CHECK_FALSE(r.resolved);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].category == "state");
  CHECK(r.errors[0].loc.line == 4);
}

TEST_CASE("duplicates are reported per category") {
  const auto r = resolve_src(R"(thing A {
  property a : Int = 0
  property a : Real = 0.0
  message a()
  statechart init S {
    state S {
    }
    state S {
    }
  }
}
thing A {
  statechart init S {
    state S {
    }
  }
}
configuration C {
  instance i : A
  instance i : A
}
)");
  CHECK_FALSE(r.resolved);
  std::vector<std::string> cats;
  for (const auto& e : r.errors) {
    CHECK(e.kind == ResolveError::Kind::DuplicateName);
    cats.push_back(e.category);
  }
  std::sort(cats.begin(), cats.end());
  CHECK(cats == std::vector<std::string>{"instance", "property", "state", "thing"});
}

TEST_CASE("send through a port that does not declare the message") {
  const auto r = resolve_src(R"(thing A {
  message m()
  message n()
  required port out {
    sends m
  }
  statechart init S {
    state S {
      on entry {
        out!n()
      }
    }
  }
}
)");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].name == "n");
  CHECK(r.errors[0].message.find("does not send") != std::string::npos);
}

TEST_CASE("connector endpoints resolve against instance types") {
  const auto r = resolve_src(R"(thing A {
  message m()
  provided port p {
    receives m
  }
  statechart init S {
    state S {
    }
  }
}
configuration C {
  instance a : A
  instance b : B
  connector a.q <-> c.p
}
)");
  std::vector<std::string> names;
  for (const auto& e : r.errors) names.push_back(e.name);
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"B", "c", "q"});
}

TEST_CASE("best-effort binding keeps what it can") {
  std::vector<ResolveError> errors;
  const auto m = bind_best_effort(parse_ok(R"(thing A {
  property p : Int = 0
  statechart init S {
    state S {
      on entry {
        p = q + p
      }
    }
  }
}
)"),
                                  errors);
  REQUIRE(errors.size() == 1);
  const Action& a = m.model.things[0].statechart.states[0].entryActions[0];
  CHECK(a.ref == RefKind::Property);
  CHECK(a.value->operands[0].ref == RefKind::Unbound);
  CHECK(a.value->operands[1].ref == RefKind::Property);
}

TEST_CASE("binding table is deterministic") {
  const auto src = test::slurp(test::models_dir() / "smart-grid-imputation.mlq");
  const auto a = resolve_src(src);
  const auto b = resolve_src(src);
  REQUIRE(a.resolved);
  CHECK(a.resolved->bindings == b.resolved->bindings);
  for (const auto& bnd : a.resolved->bindings) CHECK(bnd.index >= 0);
}
