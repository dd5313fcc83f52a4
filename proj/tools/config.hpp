#pragma once

// Experiment configuration files: strict JSON with a fixed top-level shape
//
//   {"verb": ..., "grid": {"d":, "N":, "shift": [...]}, "seed": ...,
//    "params": {...}, "output": {"path": ..., "format": "csv" | "json"}}
//
// Unknown keys anywhere are rejected with an error naming the key path.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "czlab/dyadics.hpp"
#include "czlab/serialize.hpp"

namespace czlab::cli {

extern const std::vector<std::string> kVerbs;

enum class OutputFormat { kCsv, kJson };

struct ExperimentConfig {
  std::string verb;
  GridSpec grid;
  std::optional<std::uint64_t> seed;
  Json params = Json::object();
  std::string output_path = ".";
  OutputFormat format = OutputFormat::kCsv;
};

// Throws ErrorKind::kConfig. Verb-specific params are checked here too; the
// seed may still come from the command line, so its absence is checked by run().
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json to_json(const ExperimentConfig& config);

// Whether the verb with these params draws random numbers.
bool needs_seed(const ExperimentConfig& config);

// Checks that every key of `j` is in `allowed`; `where` prefixes diagnostics.
void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed);

}  // namespace czlab::cli
