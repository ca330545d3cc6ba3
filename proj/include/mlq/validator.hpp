#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/ast.hpp"
#include "mlq/diagnostic.hpp"

namespace mlq {

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;  // ordered by line, then column
  bool valid = true;                    // no ERROR diagnostics
};

/// Source of CSV headers for dataset-aware checks.
class DatasetAccess {
 public:
  virtual ~DatasetAccess() = default;
  /// Column names of the dataset, or nullopt when it is not available.
  virtual std::optional<std::vector<std::string>> header(std::string_view datasetPath) const = 0;
  /// Whether an unavailable dataset is itself reported (VAL007) or the
  /// dataset-aware check is skipped for that block.
  virtual bool report_missing() const { return true; }
};

/// Resolves dataset paths relative to a base directory.
class DirectoryDatasetAccess : public DatasetAccess {
 public:
  explicit DirectoryDatasetAccess(std::filesystem::path base, bool reportMissing = true)
      : base_(std::move(base)), reportMissing_(reportMissing) {}

  std::optional<std::vector<std::string>> header(std::string_view datasetPath) const override;
  bool report_missing() const override { return reportMissing_; }

 private:
  std::filesystem::path base_;
  bool reportMissing_;
};

/// Runs every semantic check and collects all diagnostics.
ValidationReport validate(const Model& model, const DatasetAccess* datasets = nullptr);

/// Typing environment for one action block.
struct TypeScope {
  const ThingDef* thing = nullptr;
  const MessageDef* message = nullptr;  // trigger message, when in a transition
  std::vector<DType> locals;            // by local slot
};

class TypeMismatch : public std::runtime_error {
 public:
  TypeMismatch(SourceLoc loc, std::string expected, std::string found);
  SourceLoc loc;
  std::string expected;
  std::string found;
};

/// Type of a bound expression. INT op INT stays INT except `/`, which is REAL;
/// mixed INT/REAL arithmetic widens to REAL; comparisons yield BOOL.
/// Throws TypeMismatch.
DType type_of(const Expr& expr, const TypeScope& scope);

}  // namespace mlq
