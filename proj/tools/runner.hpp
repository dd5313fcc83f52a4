#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace czlab::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunResult {
  std::vector<std::string> files;  // written, relative to the output directory
  Json constants = Json::object();
  bool passed = true;              // invariant-suite: every check held
};

// Type-checks config.params for config.verb; throws ErrorKind::kConfig. With
// `require_seed`, a randomized verb without a seed is an error too.
void validate_params(const ExperimentConfig& config, bool require_seed);

// Runs the verb and writes <dir>/<verb>.<csv|json> and <dir>/manifest.json.
// Throws ErrorKind::kConfig when a randomized verb has no seed.
RunResult run(const ExperimentConfig& config, const std::string& dir);

}  // namespace czlab::cli
