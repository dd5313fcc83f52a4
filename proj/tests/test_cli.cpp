#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "czlab/error.hpp"
#include "runner.hpp"

using namespace czlab;
using namespace czlab::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("czlab_cli_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

ErrorKind error_kind(const Json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kIo;  // no error
}

std::string error_message(const Json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Json manifest_without_run_details(const std::filesystem::path& dir) {
  Json m = Json::parse(slurp(dir / "manifest.json"));
  m.erase("wall_time_seconds");
  m["config"]["output"].erase("path");
  return m;
}

}  // namespace

TEST_CASE("the minimal characteristics run on w = 1 is a single row of value 1") {
  const auto dir = scratch("minimal");
  const auto c = parse_config(Json::parse(R"({"verb": "characteristics", "grid": {"d": 1, "N": 5}})"));
  run(c, dir.string());
  CHECK(slurp(dir / "characteristics.csv") == "quantity,p,value,witness_level,witness_code\nap,2,1,0,0\n");
  const Json m = Json::parse(slurp(dir / "manifest.json"));
  CHECK(m["version"] == kVersion);
  CHECK(m["config"]["verb"] == "characteristics");
  CHECK(m.contains("wall_time_seconds"));
}

TEST_CASE("sweep output follows the row schema") {
  const auto dir = scratch("sweep");
  const auto c = parse_config(Json::parse(R"({
    "verb": "sharpness-sweep", "grid": {"d": 1, "N": 4}, "seed": 3,
    "params": {"operator": {"kind": "random-shift", "m": 1, "n": 1}, "p": [2, 3], "N": [3, 4],
               "weights": [{"family": "power", "param": -0.5}, {"family": "cascade", "param": 0.5}]}})"));
  run(c, dir.string());
  std::istringstream csv(slurp(dir / "sharpness-sweep.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "family,param,p,N,joint_ap,ainfty_w,ainfty_sigma,norm,rhs,ratio,buckley_rhs");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
  }
  CHECK(rows == 8);
  const Json m = Json::parse(slurp(dir / "manifest.json"));
  CHECK(m["constants"].contains("sweep_ratio_max"));
  CHECK(m["constants"].contains("sweep_ratio_growth"));
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const char* configs[] = {
      R"({"verb": "characteristics", "grid": {"d": 2, "N": 4}, "seed": 9,
          "params": {"weight": {"family": "cascade", "param": 0.6}, "p": [1.5, 3], "ainfty": true}})",
      R"({"verb": "shift-apply", "grid": {"d": 1, "N": 6}, "seed": 9,
          "params": {"shift": {"kind": "random", "m": 2, "n": 1}, "function": {"kind": "random"}},
          "output": {"format": "json"}})",
      R"({"verb": "hilbert-approx", "grid": {"d": 1, "N": 6}, "seed": 9, "params": {"grids": 50}})",
      R"({"verb": "sawyer-test", "grid": {"d": 1, "N": 2}, "seed": 9, "params": {"instances": 5}})",
      R"({"verb": "lerner-decompose", "grid": {"d": 1, "N": 6}, "seed": 9, "output": {"format": "json"}})",
      R"({"verb": "stopping-audit", "grid": {"d": 2, "N": 4}, "seed": 9})",
      R"({"verb": "sharpness-sweep", "grid": {"d": 1, "N": 4}, "seed": 9, "params": {"p": 3, "N": 3}})",
      R"({"verb": "invariant-suite", "grid": {"d": 1, "N": 5}, "seed": 9, "params": {"instances": 4}})",
  };
  for (const char* text : configs) {
    const auto c = parse_config(Json::parse(text));
    CAPTURE(c.verb);
    const auto a = scratch(c.verb + "_a");
    const auto b = scratch(c.verb + "_b");
    const auto ra = run(c, a.string());
    run(c, b.string());
    CHECK(ra.passed);
    for (const auto& f : ra.files) {
      if (f != "manifest.json") CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(manifest_without_run_details(a) == manifest_without_run_details(b));
    auto other = c;
    other.seed = *c.seed + 1;
    const auto o = scratch(c.verb + "_o");
    run(other, o.string());
    // root-cube characteristics of a balanced cascade do not depend on the signs
    if (c.verb != "invariant-suite" && c.verb != "characteristics") {
      CHECK(slurp(a / ra.files[0]) != slurp(o / ra.files[0]));
    }
  }
}

TEST_CASE("configs round-trip through serialization") {
  const auto c = parse_config(Json::parse(R"({
    "verb": "sawyer-test", "grid": {"d": 1, "N": 2, "shift": [0.25]}, "seed": 18446744073709551615,
    "params": {"p": [1.5, 3], "instances": 10}, "output": {"path": "out", "format": "json"}})"));
  CHECK(*c.seed == 18446744073709551615ULL);
  const Json once = to_json(c);
  CHECK(to_json(parse_config(once)) == once);
  CHECK(Json::parse(once.dump()) == once);
}

TEST_CASE("invalid configs name the offending field") {
  CHECK(error_message(Json::parse(R"({"verb": "characteristics", "grid": {"d": 1, "N": 3}, "colour": 1})"))
            .find("'colour'") != std::string::npos);
  CHECK(error_message(Json::parse(R"({"verb": "characteristics", "grid": {"d": 1, "N": 3},
                                    "params": {"weight": {"family": "power", "exponent": 2}}})"))
            .find("'params.weight.exponent'") != std::string::npos);
  CHECK(error_message(Json::parse(R"({"verb": "characteristics", "grid": {"d": 1, "N": 3, "M": 2}})"))
            .find("'grid.M'") != std::string::npos);
  {
    const auto c = parse_config(Json::parse(R"({"verb": "sawyer-test", "grid": {"d": 1, "N": 2}})"));
    CHECK(needs_seed(c));
    CHECK_THROWS_WITH_AS(run(c, scratch("noseed").string()), doctest::Contains("seed"), Error);
    CHECK_FALSE(needs_seed(parse_config(Json::parse(R"({"verb": "shift-apply", "grid": {"d": 1, "N": 3}})"))));
  }
  CHECK(error_message(Json::parse(R"({"verb": "hilbert-approx", "grid": {"d": 2, "N": 4}, "seed": 1})"))
            .find("grid.d") != std::string::npos);
  CHECK(error_kind(Json::parse(R"({"verb": "plot", "grid": {"d": 1, "N": 3}})")) == ErrorKind::kConfig);
  CHECK(error_kind(Json::parse(R"({"verb": "characteristics"})")) == ErrorKind::kConfig);
  CHECK(error_kind(Json::parse(R"({"verb": "characteristics", "grid": {"d": 1, "N": 3},
                                 "params": {"p": 0.5}})")) == ErrorKind::kConfig);
  CHECK(error_kind(Json::parse(R"({"verb": "characteristics", "grid": {"d": 1, "N": 3},
                                 "output": {"format": "xml"}})")) == ErrorKind::kConfig);
  CHECK(error_kind(Json::parse(R"({"verb": "hilbert-approx", "grid": {"d": 1, "N": 5}, "seed": 1,
                                 "params": {"pairs": [{"f": [0, 4], "g": [4, 8]}]}})")) == ErrorKind::kConfig);
  // deterministic verbs need no seed
  CHECK(error_kind(Json::parse(R"({"verb": "shift-apply", "grid": {"d": 1, "N": 3}})")) == ErrorKind::kIo);
}
