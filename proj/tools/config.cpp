#include "config.hpp"

#include <algorithm>
#include <fstream>

#include "czlab/error.hpp"
#include "runner.hpp"

namespace czlab::cli {

const std::vector<std::string> kVerbs = {"characteristics", "shift-apply",     "hilbert-approx", "sawyer-test",
                                         "lerner-decompose", "stopping-audit", "sharpness-sweep", "invariant-suite"};

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require(j.is_object(), ErrorKind::kConfig, where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    require(known, ErrorKind::kConfig, "unknown field '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

namespace {

GridSpec parse_grid(const Json& j) {
  check_keys(j, "grid", {"d", "N", "shift"});
  require(j.contains("d") && j["d"].is_number_integer(), ErrorKind::kConfig, "grid.d: expected an integer");
  require(j.contains("N") && j["N"].is_number_integer(), ErrorKind::kConfig, "grid.N: expected an integer");
  std::vector<double> shift;
  if (j.contains("shift")) {
    require(j["shift"].is_array(), ErrorKind::kConfig, "grid.shift: expected an array");
    for (const auto& s : j["shift"]) {
      require(s.is_number(), ErrorKind::kConfig, "grid.shift: expected numbers");
      shift.push_back(s.get<double>());
    }
  }
  try {
    return GridSpec(j["d"].get<int>(), j["N"].get<int>(), std::move(shift));
  } catch (const Error& e) {
    fail(ErrorKind::kConfig, std::string("grid: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, "", {"verb", "grid", "seed", "params", "output"});
  ExperimentConfig c;
  require(j.contains("verb") && j["verb"].is_string(), ErrorKind::kConfig, "verb: expected a string");
  c.verb = j["verb"].get<std::string>();
  require(std::find(kVerbs.begin(), kVerbs.end(), c.verb) != kVerbs.end(), ErrorKind::kConfig,
          "verb: unknown verb '" + c.verb + "'");
  require(j.contains("grid"), ErrorKind::kConfig, "grid: missing");
  c.grid = parse_grid(j["grid"]);
  if (j.contains("seed")) {
    require(j["seed"].is_number_unsigned(), ErrorKind::kConfig, "seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    require(j["params"].is_object(), ErrorKind::kConfig, "params: expected an object");
    c.params = j["params"];
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    check_keys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      require(o["path"].is_string(), ErrorKind::kConfig, "output.path: expected a string");
      c.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      require(f == "csv" || f == "json", ErrorKind::kConfig, "output.format: expected \"csv\" or \"json\"");
      c.format = f == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
    }
  }
  validate_params(c, false);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kConfig, "cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::kConfig, "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["verb"] = c.verb;
  Json grid;
  grid["d"] = c.grid.dimension();
  grid["N"] = c.grid.finest_level();
  if (!c.grid.shift().empty()) grid["shift"] = c.grid.shift();
  j["grid"] = grid;
  if (c.seed) j["seed"] = *c.seed;
  j["params"] = c.params;
  j["output"] = {{"path", c.output_path}, {"format", c.format == OutputFormat::kCsv ? "csv" : "json"}};
  return j;
}

}  // namespace czlab::cli
