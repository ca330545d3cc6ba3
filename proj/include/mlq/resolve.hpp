#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlq/ast.hpp"

namespace mlq {

/// One resolved name occurrence: where it appears, what kind of definition it
/// denotes and that definition's index within its owner.
struct Binding {
  SourceLoc loc;
  std::string name;
  std::string category;  // "thing", "state", "port", "message", "property", "local", "param", ...
  int index = -1;

  friend bool operator==(const Binding&, const Binding&) = default;
};

struct ResolveError {
  enum class Kind { UnresolvedReference, DuplicateName };

  Kind kind = Kind::UnresolvedReference;
  SourceLoc loc;
  std::string name;
  std::string category;
  std::string message;
};

/// A model whose expression references and assignment targets carry their
/// bindings, plus the full binding table in traversal order.
struct ResolvedModel {
  Model model;
  std::vector<Binding> bindings;
};

struct ResolveResult {
  std::optional<ResolvedModel> resolved;  // present iff errors is empty
  std::vector<ResolveError> errors;
};

/// Binds every name reference to its definition. Resolution is all or
/// nothing: any error yields no ResolvedModel.
ResolveResult resolve_references(const Model& model);

/// Binds whatever can be bound and reports the rest. References that fail to
/// resolve stay RefKind::Unbound. Used by the validator to keep checking
/// after resolution errors.
ResolvedModel bind_best_effort(const Model& model, std::vector<ResolveError>& errors);

}  // namespace mlq
