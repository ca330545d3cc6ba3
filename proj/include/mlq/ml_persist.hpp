#pragma once

#include <filesystem>
#include <string_view>

#include "mlq/ml_core.hpp"

namespace mlq::ml {

/// Parses a model file document written by to_model_text.
/// Throws UnsupportedVersion or CorruptModelFile.
TrainedModel parse_model_text(std::string_view text);

/// Throws PersistenceIO when the file cannot be read.
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace mlq::ml
