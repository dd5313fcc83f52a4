#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "czlab/characteristics.hpp"
#include "czlab/error.hpp"
#include "czlab/hilbert.hpp"
#include "czlab/lerner.hpp"
#include "czlab/normlab.hpp"
#include "czlab/parallel.hpp"
#include "czlab/positive.hpp"
#include "czlab/random.hpp"
#include "czlab/serial.hpp"
#include "czlab/shifts.hpp"
#include "czlab/stopping.hpp"
#include "czlab/weights.hpp"

namespace czlab::cli {

namespace {

// ---------------------------------------------------------------- params

class Params {
 public:
  Params(const Json& j, std::string where, std::initializer_list<const char*> allowed)
      : j_(j), where_(std::move(where)) {
    check_keys(j_, where_, allowed);
  }

  bool has(const char* key) const { return j_.contains(key); }
  const Json& raw(const char* key) const { return j_.at(key); }
  std::string path(const char* key) const { return where_ + "." + key; }

  double num(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    require(j_[key].is_number(), ErrorKind::kConfig, path(key) + ": expected a number");
    return j_[key].get<double>();
  }
  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    require(j_[key].is_number_integer(), ErrorKind::kConfig, path(key) + ": expected an integer");
    return j_[key].get<int>();
  }
  int positive(const char* key, int fallback) const {
    const int v = integer(key, fallback);
    require(v > 0, ErrorKind::kConfig, path(key) + ": expected a positive integer");
    return v;
  }
  std::uint64_t u64(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const bool ok = j_[key].is_number_unsigned() || (j_[key].is_number_integer() && j_[key].get<std::int64_t>() >= 0);
    require(ok, ErrorKind::kConfig, path(key) + ": expected a non-negative integer");
    return j_[key].get<std::uint64_t>();
  }
  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    require(j_[key].is_boolean(), ErrorKind::kConfig, path(key) + ": expected true or false");
    return j_[key].get<bool>();
  }
  std::string choice(const char* key, const std::string& fallback, std::initializer_list<const char*> options) const {
    if (!has(key)) return fallback;
    const std::string v = j_[key].is_string() ? j_[key].get<std::string>() : "";
    const bool ok = std::any_of(options.begin(), options.end(), [&](const char* o) { return v == o; });
    std::string list;
    for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
    require(ok, ErrorKind::kConfig, path(key) + ": expected one of " + list);
    return v;
  }
  // A number or an array of numbers.
  std::vector<double> nums(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_[key];
    if (v.is_number()) return {v.get<double>()};
    require(v.is_array() && !v.empty(), ErrorKind::kConfig, path(key) + ": expected a number or a non-empty array");
    std::vector<double> out;
    for (const auto& x : v) {
      require(x.is_number(), ErrorKind::kConfig, path(key) + ": expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  std::vector<int> ints(const char* key, std::vector<int> fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_[key];
    if (v.is_number_integer()) return {v.get<int>()};
    require(v.is_array() && !v.empty(), ErrorKind::kConfig, path(key) + ": expected an integer or a non-empty array");
    std::vector<int> out;
    for (const auto& x : v) {
      require(x.is_number_integer(), ErrorKind::kConfig, path(key) + ": expected integers");
      out.push_back(x.get<int>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string where_;
};

std::vector<double> exponents(const Params& p, const char* key, std::vector<double> fallback) {
  auto ps = p.nums(key, std::move(fallback));
  for (double x : ps) require(x > 1.0 && std::isfinite(x), ErrorKind::kConfig, p.path(key) + ": exponents must exceed 1");
  return ps;
}

std::uint64_t run_seed(const ExperimentConfig& c) {
  require(c.seed.has_value(), ErrorKind::kConfig, "seed: required by verb '" + c.verb + "' with these params");
  return *c.seed;
}

DyadicCube parse_cube(const Json& j, const std::string& where, const GridSpec& grid) {
  const Params p(j, where, {"level", "code"});
  const int level = p.integer("level", 0);
  require(level >= 0 && level <= grid.finest_level(), ErrorKind::kConfig, where + ".level: outside the grid");
  const std::uint64_t code = p.u64("code", 0);
  require(code < grid.cube_count(level), ErrorKind::kConfig, where + ".code: outside the grid");
  return DyadicCube::from_code(grid.dimension(), level, code);
}

// ------------------------------------------------------ weights, functions

// {"family", "param", "seed"} or {"values": [...]}.
struct WeightConfig {
  std::string family = "constant";
  double param = 1.0;
  std::optional<std::uint64_t> seed;
  std::vector<double> values;
};

WeightConfig parse_weight(const Json& j, const std::string& where) {
  const Params p(j, where, {"family", "param", "seed", "values"});
  WeightConfig w;
  if (p.has("values")) {
    require(!p.has("family") && !p.has("param"), ErrorKind::kConfig, where + ": give either values or a family");
    w.family = "values";
    w.values = p.nums("values", {});
    return w;
  }
  w.family = p.choice("family", "constant", {"constant", "power", "two-value", "cascade"});
  w.param = p.num("param", w.family == "cascade" ? 0.5 : 1.0);
  if (p.has("seed")) w.seed = p.u64("seed", 0);
  return w;
}

bool weight_needs_seed(const WeightConfig& w) { return w.family == "cascade" && !w.seed; }

Weight make_weight(const WeightConfig& wc, const GridSpec& grid, const ExperimentConfig& c, const std::string& where) {
  try {
    if (wc.family == "values") return Weight(StepFunction(grid, wc.values));
    const std::uint64_t seed = wc.seed ? *wc.seed : (weight_needs_seed(wc) ? run_seed(c) : 0);
    return family_weight(wc.family, grid, wc.param, seed);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    fail(ErrorKind::kConfig, where + ": " + e.what());
  }
}

std::optional<WeightConfig> weight_param(const Params& p, const char* key) {
  if (!p.has(key)) return std::nullopt;
  return parse_weight(p.raw(key), p.path(key));
}

// {"kind": "indicator" | "values" | "random" | "lumpy", ...}
struct FunctionConfig {
  std::string kind = "indicator";
  std::vector<double> values;
  Json cube = Json::object();
  double lo = -1.0;
  double hi = 1.0;
};

FunctionConfig parse_function(const Json& j, const std::string& where, const GridSpec& grid) {
  const Params p(j, where, {"kind", "values", "cube", "lo", "hi"});
  FunctionConfig f;
  f.kind = p.choice("kind", p.has("values") ? "values" : "indicator", {"indicator", "values", "random", "lumpy"});
  if (f.kind == "values") {
    f.values = p.nums("values", {});
    require(f.values.size() == grid.cell_count(), ErrorKind::kConfig,
            where + ".values: expected " + std::to_string(grid.cell_count()) + " cell values");
  }
  if (p.has("cube")) {
    f.cube = p.raw("cube");
    parse_cube(f.cube, p.path("cube"), grid);
  } else {
    f.cube = {{"level", std::min(1, grid.finest_level())}, {"code", 0}};
  }
  f.lo = p.num("lo", -1.0);
  f.hi = p.num("hi", 1.0);
  require(f.lo <= f.hi, ErrorKind::kConfig, where + ": lo exceeds hi");
  return f;
}

bool function_needs_seed(const FunctionConfig& f) { return f.kind == "random" || f.kind == "lumpy"; }

StepFunction random_function(const GridSpec& grid, Rng& rng, double lo, double hi) {
  std::vector<double> v(grid.cell_count());
  for (double& x : v) x = rng.uniform(lo, hi);
  return StepFunction(grid, std::move(v));
}

// Integer values in [lo, hi]: ties and plateaus occur.
StepFunction lumpy_function(const GridSpec& grid, Rng& rng, double lo, double hi) {
  const auto span = static_cast<std::uint64_t>(std::floor(hi) - std::ceil(lo) + 1.0);
  std::vector<double> v(grid.cell_count());
  for (double& x : v) x = std::ceil(lo) + static_cast<double>(rng.below(std::max<std::uint64_t>(span, 1)));
  return StepFunction(grid, std::move(v));
}

Weight random_weight(const GridSpec& grid, Rng& rng, double spread) {
  std::vector<double> v(grid.cell_count());
  for (double& x : v) x = std::exp(rng.uniform(-spread, spread));
  return Weight(StepFunction(grid, std::move(v)));
}

TauCoefficients random_tau(const GridSpec& grid, Rng& rng, double density) {
  TauCoefficients tau(grid);
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (std::uint64_t c = 0; c < grid.cube_count(k); ++c) {
      if (rng.uniform() < density) tau.set(DyadicCube::from_code(grid.dimension(), k, c), rng.uniform());
    }
  }
  return tau;
}

StepFunction make_function(const FunctionConfig& f, const GridSpec& grid, const ExperimentConfig& c) {
  if (f.kind == "values") return StepFunction(grid, f.values);
  if (f.kind == "indicator") return StepFunction::indicator(grid, parse_cube(f.cube, "function.cube", grid));
  Rng rng(stream_seed(run_seed(c), 0));
  return f.kind == "random" ? random_function(grid, rng, f.lo, f.hi) : lumpy_function(grid, rng, f.lo, f.hi);
}

// ---------------------------------------------------------------- tables

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

std::string table_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

Json table_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
    rows.push_back(std::move(r));
  }
  return rows;
}

// A float cell that survives JSON (non-finite values become strings).
Json real(double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); }

struct Output {
  Table table;
  Json document;  // JSON form when it is not the table itself
  Json constants = Json::object();
  bool passed = true;
  std::string csv;  // overrides the table's CSV when set
};

// ------------------------------------------------------------------ verbs

struct CharacteristicsParams {
  WeightConfig weight;
  std::optional<WeightConfig> sigma;
  std::vector<double> ps;
  bool ainfty = false;
  MaximalMode mode = MaximalMode::kDyadic;
};

CharacteristicsParams parse_characteristics(const ExperimentConfig& c) {
  const Params p(c.params, "params", {"weight", "sigma", "p", "ainfty", "mode"});
  CharacteristicsParams out;
  if (auto w = weight_param(p, "weight")) out.weight = *w;
  out.sigma = weight_param(p, "sigma");
  out.ps = exponents(p, "p", {2.0});
  out.ainfty = p.flag("ainfty", false);
  out.mode = p.choice("mode", "dyadic", {"dyadic", "centered"}) == "dyadic" ? MaximalMode::kDyadic
                                                                             : MaximalMode::kCentered;
  return out;
}

Output run_characteristics(const ExperimentConfig& c) {
  const auto prm = parse_characteristics(c);
  const Weight w = make_weight(prm.weight, c.grid, c, "params.weight");
  Output out;
  out.table.columns = {"quantity", "p", "value", "witness_level", "witness_code"};
  const auto add = [&](const char* name, Json p, const CharacteristicReport& r) {
    out.table.rows.push_back({name, std::move(p), real(r.value), r.witness.level(), r.witness.code()});
  };
  for (double p : prm.ps) {
    if (prm.sigma) {
      const Weight sigma = make_weight(*prm.sigma, c.grid, c, "params.sigma");
      add("joint_ap", real(p), joint_ap(w, sigma, p));
    } else {
      add("ap", real(p), ap_characteristic(w, p));
    }
  }
  if (prm.ainfty) add("ainfty", nullptr, ainfty_characteristic(w, prm.mode));
  return out;
}

struct ShiftParams {
  std::string kind = "petermichl";
  int m = 1;
  int n = 1;
  bool cancellative = true;
  FunctionConfig function;
};

ShiftParams parse_shift_apply(const ExperimentConfig& c) {
  const Params p(c.params, "params", {"shift", "function"});
  ShiftParams out;
  if (p.has("shift")) {
    const Params s(p.raw("shift"), "params.shift", {"kind", "m", "n", "cancellative"});
    out.kind = s.choice("kind", "petermichl", {"petermichl", "random", "paraproduct"});
    out.m = s.integer("m", 1);
    out.n = s.integer("n", 1);
    require(out.m >= 0 && out.n >= 0, ErrorKind::kConfig, "params.shift: m and n must be non-negative");
    out.cancellative = s.flag("cancellative", true);
  }
  require(out.kind != "petermichl" || c.grid.dimension() == 1, ErrorKind::kConfig,
          "params.shift.kind: the petermichl shift needs grid.d = 1");
  out.function = parse_function(p.has("function") ? p.raw("function") : Json::object(), "params.function", c.grid);
  return out;
}

HaarShift make_shift(const ShiftParams& s, const ExperimentConfig& c) {
  if (s.kind == "petermichl") return build_petermichl(c.grid);
  if (s.kind == "random") return build_random_shift(s.m, s.n, stream_seed(run_seed(c), 1), c.grid, s.cancellative);
  Rng rng(stream_seed(run_seed(c), 1));
  std::map<DyadicCube, double> a;
  for (int k = 0; k < c.grid.finest_level(); ++k) {
    const DyadicCube q = DyadicCube::from_code(c.grid.dimension(), k, 0);
    a[q] = rng.uniform(-1.0, 1.0) * std::sqrt(q.volume());
  }
  return build_paraproduct(a, c.grid);
}

Output run_shift_apply(const ExperimentConfig& c) {
  const auto prm = parse_shift_apply(c);
  const HaarShift shift = make_shift(prm, c);
  const StepFunction f = make_function(prm.function, c.grid, c);
  const StepFunction sf = apply_shift(shift, f);
  const StepFunction nat = maximal_truncation(shift, f);
  Output out;
  out.table.columns = {"cell", "f", "Sf", "S_natural_f"};
  for (std::size_t x = 0; x < f.size(); ++x) out.table.rows.push_back({x, real(f[x]), real(sf[x]), real(nat[x])});
  out.document = {{"shift", to_json(shift)}, {"rows", table_json(out.table)}};
  out.constants["normalization"] = real(normalization_audit(shift));
  const double fn = lp_norm(f, 2.0);
  out.constants["l2_ratio"] = real(fn > 0.0 ? lp_norm(sf, 2.0) / fn : 0.0);
  out.constants["l2_ratio_natural"] = real(fn > 0.0 ? lp_norm(nat, 2.0) / fn : 0.0);
  return out;
}

struct HilbertParams {
  int grids = 10000;
  int coarse_levels = 10;
  // Cell ranges [begin, end) of f and g.
  std::vector<std::array<std::size_t, 4>> pairs;
};

HilbertParams parse_hilbert(const ExperimentConfig& c) {
  require(c.grid.dimension() == 1, ErrorKind::kConfig, "grid.d: hilbert-approx needs d = 1");
  const Params p(c.params, "params", {"grids", "coarse_levels", "pairs"});
  HilbertParams out;
  out.grids = p.positive("grids", 10000);
  out.coarse_levels = p.integer("coarse_levels", 10);
  require(out.coarse_levels >= 0 && out.coarse_levels <= 20, ErrorKind::kConfig,
          "params.coarse_levels: expected 0..20");
  const std::size_t n = c.grid.cell_count();
  if (!p.has("pairs")) {
    // Fractions of [0,1) in sixteenths.
    const std::size_t s = n / 16;
    require(s > 0, ErrorKind::kConfig, "grid.N: default pairs need N >= 4");
    out.pairs = {{0, 4 * s, 6 * s, 10 * s},  {2 * s, 6 * s, 8 * s, 16 * s}, {4 * s, 8 * s, 9 * s, 13 * s},
                 {6 * s, 8 * s, 10 * s, 14 * s}, {8 * s, 12 * s, 13 * s, 16 * s}};
    return out;
  }
  const Json& pairs = p.raw("pairs");
  require(pairs.is_array() && !pairs.empty(), ErrorKind::kConfig, "params.pairs: expected a non-empty array");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string where = "params.pairs[" + std::to_string(i) + "]";
    const Params pp(pairs[i], where, {"f", "g"});
    std::array<std::size_t, 4> r{};
    for (int k = 0; k < 2; ++k) {
      const char* key = k ? "g" : "f";
      const std::vector<int> ends = pp.ints(key, {});
      require(ends.size() == 2 && ends[0] >= 0 && ends[0] < ends[1] && static_cast<std::size_t>(ends[1]) <= n,
              ErrorKind::kConfig, pp.path(key) + ": expected [begin, end) cell indices");
      r[2 * k] = static_cast<std::size_t>(ends[0]);
      r[2 * k + 1] = static_cast<std::size_t>(ends[1]);
    }
    const bool separated = r[1] + 1 < r[2] || r[3] + 1 < r[0];
    require(separated, ErrorKind::kConfig, where + ": f and g must be separated by at least one cell");
    out.pairs.push_back(r);
  }
  return out;
}

StepFunction range_indicator(const GridSpec& grid, std::size_t begin, std::size_t end) {
  std::vector<double> v(grid.cell_count(), 0.0);
  std::fill(v.begin() + static_cast<std::ptrdiff_t>(begin), v.begin() + static_cast<std::ptrdiff_t>(end), 1.0);
  return StepFunction(grid, std::move(v));
}

Output run_hilbert(const ExperimentConfig& c) {
  const auto prm = parse_hilbert(c);
  const auto ensemble =
      GridEnsemble::random(c.grid, static_cast<std::size_t>(prm.grids), run_seed(c), prm.coarse_levels);
  std::vector<HilbertPairing> pairings;
  for (const auto& r : prm.pairs) {
    pairings.push_back(
        hilbert_average(ensemble, range_indicator(c.grid, r[0], r[1]), range_indicator(c.grid, r[2], r[3])));
  }
  const auto fit = fit_proportionality(pairings);
  Output out;
  out.table.columns = {"pair",   "f_begin", "f_end",  "g_begin", "g_end", "average", "standard_error",
                       "direct", "fitted",  "relative_residual"};
  for (std::size_t i = 0; i < pairings.size(); ++i) {
    const auto& r = prm.pairs[i];
    const auto& h = pairings[i];
    out.table.rows.push_back({i, r[0], r[1], r[2], r[3], real(h.average), real(h.standard_error), real(h.direct),
                              real(fit.constant * h.direct), real(fit.relative_residuals[i])});
  }
  out.constants["fitted_constant"] = real(fit.constant);
  out.constants["max_relative_residual"] = real(fit.max_residual);
  return out;
}

struct SawyerParams {
  std::vector<double> ps;
  int instances = 100;
  double density = 0.7;
  double spread = 2.0;
  int budget = 8;
};

SawyerParams parse_sawyer(const ExperimentConfig& c) {
  const Params p(c.params, "params", {"p", "instances", "density", "spread", "budget"});
  SawyerParams out;
  out.ps = exponents(p, "p", {1.5, 2.0, 3.0});
  out.instances = p.positive("instances", 100);
  out.density = p.num("density", 0.7);
  require(out.density > 0.0 && out.density <= 1.0, ErrorKind::kConfig, "params.density: expected (0, 1]");
  out.spread = p.num("spread", 2.0);
  require(out.spread >= 0.0, ErrorKind::kConfig, "params.spread: expected >= 0");
  out.budget = p.integer("budget", 8);
  require(out.budget >= 0, ErrorKind::kConfig, "params.budget: expected >= 0");
  require(c.grid.finest_level() <= 6, ErrorKind::kConfig, "grid.N: sawyer-test is limited to N <= 6");
  return out;
}

Output run_sawyer(const ExperimentConfig& c) {
  const auto prm = parse_sawyer(c);
  const std::uint64_t seed = run_seed(c);
  Output out;
  out.table.columns = {"p", "instance", "norm", "t_pprime", "t_p", "proxy", "ratio"};
  double lo_all = INFINITY;
  double hi_all = 0.0;
  Json per_p = Json::array();
  for (std::size_t pi = 0; pi < prm.ps.size(); ++pi) {
    const double p = prm.ps[pi];
    double lo = INFINITY;
    double hi = 0.0;
    for (int i = 0; i < prm.instances; ++i) {
      const std::uint64_t s = stream_seed(stream_seed(seed, pi), static_cast<std::uint64_t>(i));
      Rng rng(s);
      const auto tau = random_tau(c.grid, rng, prm.density);
      const Weight w = random_weight(c.grid, rng, prm.spread);
      const Weight sigma = random_weight(c.grid, rng, prm.spread);
      const OperatorHandle op = positive_operator(tau);
      double norm = 0.0;
      if (p == 2.0) {
        const NormEstimate e = norm_p2(op, w, sigma);
        require(e.converged, ErrorKind::kNonConvergence, "spectral iteration did not converge");
        norm = e.lower_bound;
      } else {
        norm = norm_lp_lower(op, w, sigma, p, prm.budget, s).lower_bound;
      }
      const SawyerReport rep = strong_norm_bound(tau, w, sigma, p);
      const double ratio = rep.proxy > 0.0 ? norm / rep.proxy : NAN;
      if (rep.proxy > 0.0) {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      out.table.rows.push_back(
          {real(p), i, real(norm), real(rep.t_pprime.value), real(rep.t_p.value), real(rep.proxy), real(ratio)});
    }
    per_p.push_back({{"p", real(p)}, {"ratio_min", real(lo)}, {"ratio_max", real(hi)}});
    lo_all = std::min(lo_all, lo);
    hi_all = std::max(hi_all, hi);
  }
  out.constants["sawyer_ratio_bracket"] = {real(lo_all), real(hi_all)};
  out.constants["sawyer_ratio_spread"] = real(hi_all / lo_all);
  out.constants["sawyer_by_p"] = per_p;
  return out;
}

struct LernerParams {
  FunctionConfig function;
  Json q0 = Json::object();
};

LernerParams parse_lerner(const ExperimentConfig& c) {
  const Params p(c.params, "params", {"function", "q0"});
  LernerParams out;
  out.function = parse_function(p.has("function") ? p.raw("function") : Json{{"kind", "lumpy"}, {"lo", -2}, {"hi", 2}},
                                "params.function", c.grid);
  if (p.has("q0")) {
    out.q0 = p.raw("q0");
    parse_cube(out.q0, "params.q0", c.grid);
  }
  return out;
}

Output run_lerner(const ExperimentConfig& c) {
  const auto prm = parse_lerner(c);
  const StepFunction phi = make_function(prm.function, c.grid, c);
  const DyadicCube q0 = parse_cube(prm.q0, "params.q0", c.grid);
  const Decomposition dec = lerner_decompose(phi, q0);
  Output out;
  out.table.columns = {"generation", "level", "code", "omega_parent"};
  for (std::size_t l = 0; l < dec.generations.size(); ++l) {
    for (const auto& lc : dec.generations[l]) {
      out.table.rows.push_back({l + 1, lc.cube.level(), lc.cube.code(), real(lc.omega_parent)});
    }
  }
  out.document = to_json(dec);
  out.constants["C_lerner"] = real(dec.lerner_constant);
  out.constants["median"] = real(dec.median);
  out.constants["generations"] = dec.generations.size();
  const CubeFamily fam = lerner_family(c.grid, dec);
  out.constants["lambda"] = fam.empty() ? Json(nullptr) : real(lambda_constant(fam));
  return out;
}

struct StoppingParams {
  WeightConfig weight;
  Json q0 = Json::object();
};

StoppingParams parse_stopping(const ExperimentConfig& c) {
  const Params p(c.params, "params", {"weight", "q0"});
  StoppingParams out;
  out.weight.family = "cascade";
  out.weight.param = 0.7;
  if (auto w = weight_param(p, "weight")) out.weight = *w;
  if (p.has("q0")) {
    out.q0 = p.raw("q0");
    parse_cube(out.q0, "params.q0", c.grid);
  }
  return out;
}

Output run_stopping(const ExperimentConfig& c) {
  const auto prm = parse_stopping(c);
  const Weight w = make_weight(prm.weight, c.grid, c, "params.weight");
  const StoppingFamily fam(w, parse_cube(prm.q0, "params.q0", c.grid));
  const CubeSums sums(w.density());
  Output out;
  out.table.columns = {"index", "level", "code", "parent", "average", "packing_margin"};
  double min_margin = INFINITY;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& q = fam.cubes()[i];
    const double margin = fam.packing_margin(i) / q.volume();
    min_margin = std::min(min_margin, margin);
    out.table.rows.push_back({i, q.level(), q.code(), fam.parents()[i], real(sums.average(q)), real(margin)});
  }
  out.document = to_json(fam);
  const double ainfty = ainfty_characteristic(w).value;
  out.constants["members"] = fam.size();
  out.constants["depth"] = fam.depth();
  out.constants["min_relative_packing_margin"] = real(min_margin);
  out.constants["ainfty"] = real(ainfty);
  out.constants["carleson_ratio"] = real(fam.carleson_ratio(ainfty));
  return out;
}

struct SweepParams {
  bool use_default = true;
  SweepSpec custom;
  std::optional<std::vector<double>> ps;
  std::optional<std::vector<int>> levels;
  std::optional<int> budget;
};

SweepParams parse_sweep(const ExperimentConfig& c) {
  require(c.grid.dimension() == 1, ErrorKind::kConfig, "grid.d: sharpness-sweep rows need d = 1");
  const Params p(c.params, "params", {"operator", "weights", "p", "N", "budget"});
  SweepParams out;
  if (p.has("p")) out.ps = exponents(p, "p", {});
  if (p.has("N")) {
    out.levels = p.ints("N", {});
    for (int n : *out.levels) require(n >= 1 && n <= 16, ErrorKind::kConfig, "params.N: expected levels in 1..16");
  }
  if (p.has("budget")) out.budget = p.positive("budget", 4);
  out.use_default = !p.has("operator") && !p.has("weights");
  if (out.use_default) return out;
  require(p.has("operator") && p.has("weights"), ErrorKind::kConfig,
          "params: a custom sweep needs both operator and weights");
  const Params o(p.raw("operator"), "params.operator", {"kind", "m", "n", "seed", "cancellative", "truncated"});
  auto& op = out.custom.op;
  op.kind = o.choice("kind", "petermichl", {"petermichl", "random-shift", "paraproduct"});
  op.m = o.integer("m", 2);
  op.n = o.integer("n", 2);
  if (o.has("seed")) op.seed = o.u64("seed", 1);
  op.cancellative = o.flag("cancellative", true);
  op.truncated = o.flag("truncated", true);
  const Json& ws = p.raw("weights");
  require(ws.is_array() && !ws.empty(), ErrorKind::kConfig, "params.weights: expected a non-empty array");
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const WeightConfig wc = parse_weight(ws[i], "params.weights[" + std::to_string(i) + "]");
    require(wc.family != "values", ErrorKind::kConfig, "params.weights: sweeps need weight families");
    out.custom.weights.push_back({wc.family, wc.param, wc.seed.value_or(0)});
  }
  return out;
}

Output run_sweep(const ExperimentConfig& c) {
  const auto prm = parse_sweep(c);
  const std::uint64_t seed = run_seed(c);
  std::vector<SweepSpec> specs;
  if (prm.use_default) {
    specs = default_sweep(seed);
  } else {
    specs = {prm.custom};
    specs[0].seed = seed;
    if (!c.params["operator"].contains("seed")) specs[0].op.seed = stream_seed(seed, 1);
    for (auto& w : specs[0].weights) {
      if (w.family == "cascade" && w.seed == 0) w.seed = stream_seed(seed, 3);
    }
  }
  for (auto& s : specs) {
    if (prm.ps) s.ps = *prm.ps;
    if (prm.levels) s.levels = *prm.levels;
    if (prm.budget) s.budget = *prm.budget;
  }
  std::vector<SweepRow> rows;
  Json by_operator = Json::array();
  std::map<int, double> max_by_level;
  for (const auto& s : specs) {
    const auto part = sharpness_sweep(s);
    std::map<int, double> op_max;
    for (const auto& r : part) {
      op_max[r.N] = std::max(op_max[r.N], r.ratio);
      max_by_level[r.N] = std::max(max_by_level[r.N], r.ratio);
    }
    Json m = Json::object();
    for (const auto& [n, v] : op_max) m[std::to_string(n)] = real(v);
    by_operator.push_back({{"kind", s.op.kind}, {"seed", s.op.seed}, {"ratio_max_by_N", m}});
    rows.insert(rows.end(), part.begin(), part.end());
  }
  Output out;
  out.csv = sweep_csv(rows);
  Json doc = Json::array();
  for (const auto& r : rows) doc.push_back(to_json(r));
  out.document = doc;
  Json m = Json::object();
  double overall = 0.0;
  for (const auto& [n, v] : max_by_level) {
    m[std::to_string(n)] = real(v);
    overall = std::max(overall, v);
  }
  out.constants["sweep_ratio_max"] = real(overall);
  out.constants["sweep_ratio_max_by_N"] = m;
  if (max_by_level.size() >= 2) {
    out.constants["sweep_ratio_growth"] = real(max_by_level.rbegin()->second / max_by_level.begin()->second - 1.0);
  }
  out.constants["by_operator"] = by_operator;
  return out;
}

// Library-level invariants that need no dense oracle.
Output run_invariants(const ExperimentConfig& c) {
  const Params p(c.params, "params", {"instances"});
  const int instances = p.positive("instances", 20);
  const std::uint64_t seed = run_seed(c);
  const GridSpec& grid = c.grid;
  Output out;
  out.table.columns = {"check", "instances", "passed", "worst", "bound"};
  const auto record = [&](const char* name, bool ok, double worst, double bound) {
    out.table.rows.push_back({name, instances, ok, real(worst), real(bound)});
    out.passed = out.passed && ok;
  };

  double packing = INFINITY;
  double c_lerner = 0.0;
  double weak_excess = -INFINITY;
  double witness_error = 0.0;
  double serial_error = 0.0;
  double thread_error = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
    const Weight w = i % 2 ? random_weight(grid, rng, 3.0) : cascade_weight(grid, 0.8, rng.next());
    const StoppingFamily fam(w, DyadicCube::root(grid.dimension()));
    for (std::size_t k = 0; k < fam.size(); ++k) packing = std::min(packing, fam.packing_margin(k) / fam.cubes()[k].volume());

    const StepFunction phi = i % 2 ? lumpy_function(grid, rng, -2.0, 2.0) : random_function(grid, rng, -3.0, 3.0);
    c_lerner = std::max(c_lerner, lerner_decompose(phi, DyadicCube::root(grid.dimension())).lerner_constant);

    const HaarShift shift = build_random_shift(1 + i % 2, 1, rng.next(), grid, true);
    const Weight sigma = random_weight(grid, rng, 1.0);
    const Weight v = random_weight(grid, rng, 1.0);
    const double q = 1.5 + 0.25 * static_cast<double>(i % 4);
    const OperatorHandle op = shift_operator(shift);
    const NormEstimate strong = norm_lp_lower(op, v, sigma, q, 1, rng.next());
    const StepFunction witness[] = {strong.witness};
    weak_excess = std::max(weak_excess, weak_norm_estimate(op, v, sigma, q, witness) - strong.lower_bound);
    const double again = weighted_ratio(op, v, sigma, q, strong.witness);
    witness_error = std::max(witness_error, std::abs(again - strong.lower_bound) / std::max(strong.lower_bound, 1e-300));

    const StepFunction f = random_function(grid, rng, -1.0, 1.0);
    const auto diff = [](const StepFunction& a, const StepFunction& b) {
      double m = 0.0;
      for (std::size_t x = 0; x < a.size(); ++x) m = std::max(m, std::abs(a[x] - b[x]));
      return m;
    };
    serial_error = std::max({serial_error, diff(apply_shift(shift, f), serial::apply_shift(shift, f)),
                             diff(maximal_truncation(shift, f), serial::maximal_truncation(shift, f)),
                             diff(maximal_function(f), serial::maximal_function(f))});
    const int saved = thread_count();
    set_thread_count(1);
    const StepFunction one = maximal_truncation(shift, f);
    set_thread_count(saved);
    thread_error = std::max(thread_error, diff(one, maximal_truncation(shift, f)));
  }
  record("stopping_packing_margin", packing > 0.0, packing, 0.0);
  record("lerner_constant", std::isfinite(c_lerner), c_lerner, INFINITY);
  record("weak_minus_strong", weak_excess <= 0.0, weak_excess, 0.0);
  record("witness_reevaluation", witness_error <= 1e-8, witness_error, 1e-8);
  record("serial_vs_parallel", serial_error <= 1e-10, serial_error, 1e-10);
  record("thread_independence", thread_error == 0.0, thread_error, 0.0);
  out.constants["C_lerner"] = real(c_lerner);
  out.constants["min_relative_packing_margin"] = real(packing);
  return out;
}

}  // namespace

bool needs_seed(const ExperimentConfig& c) {
  if (c.verb == "characteristics") {
    const auto p = parse_characteristics(c);
    return weight_needs_seed(p.weight) || (p.sigma && weight_needs_seed(*p.sigma));
  }
  if (c.verb == "shift-apply") {
    const auto p = parse_shift_apply(c);
    return p.kind != "petermichl" || function_needs_seed(p.function);
  }
  if (c.verb == "lerner-decompose") return function_needs_seed(parse_lerner(c).function);
  if (c.verb == "stopping-audit") return weight_needs_seed(parse_stopping(c).weight);
  return true;
}

void validate_params(const ExperimentConfig& c, bool require_seed) {
  if (c.verb == "hilbert-approx") {
    parse_hilbert(c);
  } else if (c.verb == "sawyer-test") {
    parse_sawyer(c);
  } else if (c.verb == "sharpness-sweep") {
    parse_sweep(c);
  } else if (c.verb == "invariant-suite") {
    Params(c.params, "params", {"instances"}).positive("instances", 20);
  }
  // the remaining verbs are parsed by needs_seed
  const bool randomized = needs_seed(c);
  require(!require_seed || !randomized || c.seed.has_value(), ErrorKind::kConfig,
          "seed: required by verb '" + c.verb + "'");
}

RunResult run(const ExperimentConfig& c, const std::string& dir) {
  validate_params(c, true);
  const auto start = std::chrono::steady_clock::now();
  Output out;
  if (c.verb == "characteristics") out = run_characteristics(c);
  else if (c.verb == "shift-apply") out = run_shift_apply(c);
  else if (c.verb == "hilbert-approx") out = run_hilbert(c);
  else if (c.verb == "sawyer-test") out = run_sawyer(c);
  else if (c.verb == "lerner-decompose") out = run_lerner(c);
  else if (c.verb == "stopping-audit") out = run_stopping(c);
  else if (c.verb == "sharpness-sweep") out = run_sweep(c);
  else out = run_invariants(c);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorKind::kIo, "cannot create output directory '" + dir + "': " + ec.message());
  const auto write = [&](const std::string& name, const std::string& text) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    f << text;
    require(static_cast<bool>(f), ErrorKind::kIo, "cannot write '" + path + "'");
  };

  RunResult result;
  const std::string name = c.verb + (c.format == OutputFormat::kCsv ? ".csv" : ".json");
  if (c.format == OutputFormat::kCsv) {
    write(name, out.csv.empty() ? table_csv(out.table) : out.csv);
  } else {
    write(name, (out.document.is_null() ? table_json(out.table) : out.document).dump(2) + "\n");
  }
  result.files = {name, "manifest.json"};
  result.constants = out.constants;
  result.passed = out.passed;

  Json manifest;
  manifest["config"] = to_json(c);
  manifest["version"] = kVersion;
  manifest["outputs"] = Json::array({name});
  manifest["constants"] = out.constants;
  if (c.verb == "invariant-suite") manifest["passed"] = out.passed;
  manifest["wall_time_seconds"] = seconds;
  write("manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace czlab::cli
