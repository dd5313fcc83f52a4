#include "czlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "czlab/error.hpp"

namespace czlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  fail(ErrorKind::kInvalidArgument, "expected a number, got " + j.dump());
}

namespace {

const Json& field(const Json& j, const char* name) {
  require(j.is_object() && j.contains(name), ErrorKind::kInvalidArgument, std::string("missing field '") + name + "'");
  return j.at(name);
}

std::vector<double> numbers(const Json& j) {
  require(j.is_array(), ErrorKind::kInvalidArgument, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const Json& x : j) v.push_back(number_from(x));
  return v;
}

Json numbers_json(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

Json to_json(const GridSpec& grid) {
  return Json{{"d", grid.dimension()}, {"N", grid.finest_level()}, {"shift", numbers_json(grid.shift())}};
}

GridSpec grid_from_json(const Json& j) {
  std::vector<double> shift;
  if (j.contains("shift")) shift = numbers(j.at("shift"));
  return GridSpec(field(j, "d").get<int>(), field(j, "N").get<int>(), std::move(shift));
}

Json to_json(const DyadicCube& cube) {
  Json coords = Json::array();
  for (auto c : cube.coords()) coords.push_back(c);
  return Json{{"level", cube.level()}, {"coords", coords}};
}

DyadicCube cube_from_json(const Json& j, int dimension) {
  const auto coords = field(j, "coords").get<std::vector<std::uint32_t>>();
  require(static_cast<int>(coords.size()) == dimension, ErrorKind::kInvalidArgument, "cube has the wrong dimension");
  return DyadicCube::from_coords(field(j, "level").get<int>(), coords);
}

Json to_json(const StepFunction& f) {
  Json j = to_json(f.grid());
  j["values"] = numbers_json(f.values());
  return j;
}

StepFunction step_function_from_json(const Json& j) {
  return StepFunction(grid_from_json(j), numbers(field(j, "values")));
}

Json to_json(const CharacteristicReport& r) {
  return Json{{"value", number(r.value)}, {"witness", to_json(r.witness)}, {"p", number(r.p)}};
}

namespace {

Json haar_values(const HaarFunction& h) { return numbers_json(h.child_values); }

}  // namespace

Json to_json(const HaarShift& s) {
  Json entries = Json::array();
  for (const ShiftEntry& e : s.entries()) {
    Json pairs = Json::array();
    for (const ShiftPair& p : e.pairs) {
      pairs.push_back(Json{{"rprime", to_json(p.input.cube)},
                           {"qprime", to_json(p.output.cube)},
                           {"h_vals", haar_values(p.input)},
                           {"g_vals", haar_values(p.output)}});
    }
    entries.push_back(Json{{"cube", to_json(e.cube)}, {"pairs", pairs}});
  }
  Json j = to_json(s.grid());
  j["m"] = s.m();
  j["n"] = s.n();
  j["cancellative"] = s.cancellative();
  j["entries"] = entries;
  return j;
}

HaarShift shift_from_json(const Json& j) {
  const GridSpec grid = grid_from_json(j);
  const bool cancellative = field(j, "cancellative").get<bool>();
  const int d = grid.dimension();
  std::vector<ShiftEntry> entries;
  for (const Json& e : field(j, "entries")) {
    ShiftEntry entry{cube_from_json(field(e, "cube"), d), {}};
    for (const Json& p : field(e, "pairs")) {
      auto in = numbers(field(p, "h_vals"));
      auto out = numbers(field(p, "g_vals"));
      const auto zero_sum = [](const std::vector<double>& v) {
        double s = 0.0;
        double sup = 0.0;
        for (double x : v) {
          s += x;
          sup = std::max(sup, std::abs(x));
        }
        return std::abs(s) <= 1e-12 * std::max(1.0, sup) * static_cast<double>(v.size());
      };
      const bool in_c = zero_sum(in);
      const bool out_c = zero_sum(out);
      entry.pairs.push_back({HaarFunction{cube_from_json(field(p, "rprime"), d), std::move(in), in_c},
                             HaarFunction{cube_from_json(field(p, "qprime"), d), std::move(out), out_c}});
    }
    entries.push_back(std::move(entry));
  }
  return HaarShift(grid, field(j, "m").get<int>(), field(j, "n").get<int>(), cancellative, std::move(entries));
}

Json to_json(const TauCoefficients& tau) {
  Json a = Json::array();
  for (const auto& [cube, t] : tau.nonzero()) a.push_back(Json{{"cube", to_json(cube)}, {"tau", number(t)}});
  return a;
}

TauCoefficients tau_from_json(const Json& j, const GridSpec& grid) {
  require(j.is_array(), ErrorKind::kInvalidArgument, "tau coefficients must be a list");
  TauCoefficients tau(grid);
  for (const Json& e : j) tau.set(cube_from_json(field(e, "cube"), grid.dimension()), number_from(field(e, "tau")));
  return tau;
}

Json to_json(const Decomposition& d) {
  Json gens = Json::array();
  for (const auto& g : d.generations) {
    Json a = Json::array();
    for (const LernerCube& c : g) a.push_back(Json{{"cube", to_json(c.cube)}, {"omega_parent", number(c.omega_parent)}});
    gens.push_back(a);
  }
  return Json{{"q0", to_json(d.q0)}, {"median", number(d.median)}, {"generations", gens}};
}

Json to_json(const StoppingFamily& s) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    nodes.push_back(Json{{"cube", to_json(s.cubes()[i])}, {"parent", s.parents()[i]}, {"children", s.children()[i]}});
  }
  return Json{{"root", to_json(s.root())}, {"nodes", nodes}};
}

Json to_json(const TestingReport& r) { return Json{{"value", number(r.value)}, {"witness", to_json(r.witness)}}; }

const char* const kSweepCsvHeader = "family,param,p,N,joint_ap,ainfty_w,ainfty_sigma,norm,rhs,ratio,buckley_rhs";

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << r.family << ',' << format_double(r.param) << ',' << format_double(r.p) << ',' << r.N << ','
        << format_double(r.joint_ap) << ',' << format_double(r.ainfty_w) << ',' << format_double(r.ainfty_sigma)
        << ',' << format_double(r.norm) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio) << ','
        << format_double(r.buckley_rhs) << '\n';
  }
  return out.str();
}

Json to_json(const SweepRow& r) {
  return Json{{"family", r.family},          {"param", number(r.param)},
              {"p", number(r.p)},            {"N", r.N},
              {"joint_ap", number(r.joint_ap)}, {"ainfty_w", number(r.ainfty_w)},
              {"ainfty_sigma", number(r.ainfty_sigma)}, {"norm", number(r.norm)},
              {"rhs", number(r.rhs)},        {"ratio", number(r.ratio)},
              {"buckley_rhs", number(r.buckley_rhs)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace czlab
