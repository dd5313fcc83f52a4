#include "czlab/normlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "czlab/characteristics.hpp"
#include "czlab/error.hpp"
#include "czlab/hilbert.hpp"
#include "czlab/parallel.hpp"
#include "czlab/random.hpp"
#include "czlab/weights.hpp"

namespace czlab {

OperatorHandle shift_operator(const HaarShift& shift) {
  const HaarShift t = transpose(shift);
  return {"shift(" + std::to_string(shift.m()) + "," + std::to_string(shift.n()) + ")",
          [shift](const StepFunction& f) { return apply_shift(shift, f); },
          [t](const StepFunction& f) { return apply_shift(t, f); }, true};
}

OperatorHandle truncation_operator(const HaarShift& shift) {
  return {"truncation(" + std::to_string(shift.m()) + "," + std::to_string(shift.n()) + ")",
          [shift](const StepFunction& f) { return maximal_truncation(shift, f); }, {}, false};
}

OperatorHandle positive_operator(const TauCoefficients& tau) {
  const auto apply = [tau](const StepFunction& f) {
    return apply_positive(tau, Weight::constant(f.grid(), 1.0), f);
  };
  return {"positive", apply, apply, true};
}

OperatorHandle identity_operator() {
  const auto apply = [](const StepFunction& f) { return f; };
  return {"identity", apply, apply, true};
}

namespace {

double weighted_lp(std::span<const double> f, double p, std::span<const double> mu, double vol) {
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    terms[i] = p == 2.0 ? f[i] * f[i] * mu[i] : std::pow(std::abs(f[i]), p) * mu[i];
  }
  return std::pow(pairwise_sum(terms) * vol, 1.0 / p);
}

double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> mu) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i] * mu[i];
  return pairwise_sum(terms);
}

StepFunction times(const StepFunction& f, const Weight& mu) { return pointwise_product(f, mu.density()); }

StepFunction normalized(const StepFunction& f, double p, const Weight& sigma) {
  const double norm = lp_norm(f, p, sigma);
  return norm > 0.0 ? (1.0 / norm) * f : f;
}

}  // namespace

double weighted_ratio(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p, const StepFunction& f) {
  const double vol = f.grid().cell_volume();
  const double denom = weighted_lp(f.values(), p, sigma.values(), vol);
  if (denom == 0.0) return 0.0;
  const StepFunction g = op.apply(times(f, sigma));
  return weighted_lp(g.values(), p, w.values(), vol) / denom;
}

NormEstimate norm_p2(const OperatorHandle& op, const Weight& w, const Weight& sigma, double tolerance,
                     int max_iterations) {
  require(op.linear && static_cast<bool>(op.apply_transpose), ErrorKind::kInvalidArgument,
          "norm_p2 needs a linear operator with a transpose");
  check_same_grid(w.grid(), sigma.grid());
  const GridSpec& grid = w.grid();
  const double vol = grid.cell_volume();

  // Fixed pseudo-random start, generic with respect to every eigenspace.
  Rng rng(0x5eedULL);
  std::vector<double> start(grid.cell_count());
  for (double& x : start) x = rng.uniform(-1.0, 1.0) + 0.5;
  StepFunction v = normalized(StepFunction(grid, std::move(start)), 2.0, sigma);

  NormEstimate est;
  est.method = NormMethod::kSpectral;
  est.p = 2.0;
  est.converged = false;
  double theta = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const StepFunction u = op.apply_transpose(times(op.apply(times(v, sigma)), w));
    theta = weighted_dot(u.values(), v.values(), sigma.values()) * vol;
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] - theta * v[i];
    residual = weighted_lp(r, 2.0, sigma.values(), vol);
    est.iterations = it;
    const double unorm = lp_norm(u, 2.0, sigma);
    if (unorm == 0.0) {
      theta = 0.0;
      residual = 0.0;
      est.converged = true;
      break;
    }
    if (residual <= tolerance * theta) {
      est.converged = true;
      break;
    }
    v = (1.0 / unorm) * u;
  }
  est.witness = v;
  est.lower_bound = weighted_ratio(op, w, sigma, 2.0, v);
  if (est.converged) {
    est.upper_bound = std::max(std::sqrt(std::max(theta, 0.0) + residual), est.lower_bound);
  } else {
    // The residual only locates some eigenvalue, so fall back to the
    // Hilbert-Schmidt norm over the orthonormal basis of scaled cell indicators.
    std::vector<double> columns(grid.cell_count());
    const auto count = static_cast<std::ptrdiff_t>(columns.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
      const auto x = static_cast<std::size_t>(j);
      std::vector<double> e(grid.cell_count(), 0.0);
      e[x] = 1.0 / std::sqrt(sigma[x] * vol);
      const StepFunction g = op.apply(times(StepFunction(grid, std::move(e)), sigma));
      const double n = weighted_lp(g.values(), 2.0, w.values(), vol);
      columns[x] = n * n;
    }
    est.upper_bound = std::max(std::sqrt(pairwise_sum(columns)), est.lower_bound);
  }
  return est;
}

std::vector<StepFunction> cube_indicators(const GridSpec& grid) {
  std::vector<StepFunction> out;
  out.reserve(grid.total_cube_count());
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (std::uint64_t c = 0; c < grid.cube_count(k); ++c) {
      out.push_back(StepFunction::indicator(grid, DyadicCube::from_code(grid.dimension(), k, c)));
    }
  }
  return out;
}

namespace {

struct Candidate {
  StepFunction f;
  double value = 0.0;
};

// One p-norm power step; returns the new (normalized) function.
StepFunction boyd_step(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p,
                       const StepFunction& f) {
  const StepFunction g = op.apply(times(f, sigma));
  std::vector<double> dual(g.size());
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const double a = std::abs(g[i]);
    dual[i] = w[i] * (a == 0.0 ? 0.0 : std::copysign(std::pow(a, p - 1.0), g[i]));
  }
  const StepFunction z = times(op.apply_transpose(StepFunction(f.grid(), std::move(dual))), sigma);
  const double pp = p / (p - 1.0);
  std::vector<double> next(z.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double a = std::abs(z[i]) / sigma[i];
    next[i] = a == 0.0 ? 0.0 : std::copysign(std::pow(a, pp - 1.0), z[i]);
  }
  return normalized(StepFunction(f.grid(), std::move(next)), p, sigma);
}

Candidate refine(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p, Candidate c,
                 std::uint64_t stream, const SearchOptions& options, int& evaluations) {
  if (op.linear && op.apply_transpose) {
    for (int s = 0; s < options.boyd_steps; ++s) {
      StepFunction next = boyd_step(op, w, sigma, p, c.f);
      const double value = weighted_ratio(op, w, sigma, p, next);
      ++evaluations;
      if (!(value > c.value * (1.0 + 1e-12))) break;
      c = {std::move(next), value};
    }
  }
  Rng rng(stream);
  double step = options.initial_step;
  for (int s = 0; s < options.ascent_steps; ++s) {
    std::vector<double> v(c.f.values().begin(), c.f.values().end());
    for (double& x : v) x *= 1.0 + step * rng.uniform(-1.0, 1.0);
    StepFunction next = normalized(StepFunction(c.f.grid(), std::move(v)), p, sigma);
    const double value = weighted_ratio(op, w, sigma, p, next);
    ++evaluations;
    if (value > c.value) {
      c = {std::move(next), value};
    } else {
      step *= 0.5;
    }
  }
  return c;
}

}  // namespace

NormEstimate norm_lp_lower(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p, int budget,
                           std::uint64_t seed, std::span<const StepFunction> extra_starts,
                           const SearchOptions& options) {
  require(std::isfinite(p) && p > 1.0, ErrorKind::kInvalidArgument, "norm_lp_lower needs 1 < p < inf");
  require(budget >= 0, ErrorKind::kInvalidArgument, "budget must be non-negative");
  check_same_grid(w.grid(), sigma.grid());
  const GridSpec& grid = w.grid();

  // Indicators: evaluate all, refine the best few.
  const auto indicators = cube_indicators(grid);
  std::vector<double> scores(indicators.size());
  const auto count = static_cast<std::ptrdiff_t>(indicators.size());
#pragma omp parallel for schedule(static) if (count > 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    scores[static_cast<std::size_t>(i)] = weighted_ratio(op, w, sigma, p, indicators[static_cast<std::size_t>(i)]);
  }
  std::vector<std::size_t> order(indicators.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Starts in a fixed order; each gets its own random stream.
  std::vector<Candidate> starts;
  std::vector<std::uint64_t> streams;
  const auto add = [&](StepFunction f, std::uint64_t stream) {
    f = normalized(f, p, sigma);
    const double v = weighted_ratio(op, w, sigma, p, f);
    starts.push_back({std::move(f), v});
    streams.push_back(stream);
  };
  const std::size_t refine_count = std::min(order.size(), static_cast<std::size_t>(std::max(options.refine_indicators, 0)));
  for (std::size_t i = 0; i < refine_count; ++i) add(indicators[order[i]], stream_seed(seed, 1000000 + i));
  if (options.spectral_start && op.linear && op.apply_transpose) {
    add(norm_p2(op, w, sigma, 1e-6, 300).witness, stream_seed(seed, 2000000));
  }
  for (std::size_t i = 0; i < extra_starts.size(); ++i) {
    check_same_grid(extra_starts[i].grid(), grid);
    add(extra_starts[i], stream_seed(seed, 3000000 + i));
  }
  for (int r = 0; r < budget; ++r) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> v(grid.cell_count());
    const bool positive = r % 2 == 0;
    for (double& x : v) x = positive ? rng.uniform(0.05, 1.0) : rng.uniform(-1.0, 1.0);
    add(StepFunction(grid, std::move(v)), stream_seed(seed, 4000000 + static_cast<std::uint64_t>(r)));
  }

  NormEstimate best;
  best.method = NormMethod::kSearch;
  best.p = p;
  best.lower_bound = -1.0;
  int evaluations = static_cast<int>(indicators.size());
  if (!order.empty()) {
    best.lower_bound = scores[order.front()];
    best.witness = indicators[order.front()];
  }
  std::vector<Candidate> refined(starts.size());
  std::vector<int> evals(starts.size(), 0);
  const auto nstarts = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1) if (nstarts > 1)
  for (std::ptrdiff_t i = 0; i < nstarts; ++i) {
    const auto k = static_cast<std::size_t>(i);
    refined[k] = refine(op, w, sigma, p, starts[k], streams[k], options, evals[k]);
  }
  for (std::size_t i = 0; i < refined.size(); ++i) {
    evaluations += evals[i];
    if (refined[i].value > best.lower_bound) {
      best.lower_bound = refined[i].value;
      best.witness = refined[i].f;
    }
  }
  best.lower_bound = std::max(best.lower_bound, 0.0);
  best.iterations = evaluations;
  return best;
}

double weak_norm_estimate(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p,
                          std::span<const StepFunction> witnesses) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::kInvalidArgument, "weak estimate needs 1 <= p < inf");
  const double vol = w.grid().cell_volume();
  std::vector<double> best(witnesses.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(witnesses.size());
#pragma omp parallel for schedule(static) if (count > 16)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const StepFunction& f = witnesses[static_cast<std::size_t>(k)];
    const double fn = lp_norm(f, p, sigma);
    if (fn == 0.0) continue;
    const StepFunction g = op.apply(times(f, sigma));
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(g[a]) > std::abs(g[b]);
    });
    double mass = 0.0;
    double value = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const double level = std::abs(g[order[i]]);
      if (level == 0.0) break;
      mass += w[order[i]] * vol;
      // Credit a level only once all cells at that magnitude are counted.
      if (i + 1 < order.size() && std::abs(g[order[i + 1]]) == level) continue;
      value = std::max(value, level * std::pow(mass, 1.0 / p));
    }
    best[static_cast<std::size_t>(k)] = value / fn;
  }
  double out = 0.0;
  for (double b : best) out = std::max(out, b);
  return out;
}

double weak_norm_estimate(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p) {
  const auto witnesses = cube_indicators(w.grid());
  return weak_norm_estimate(op, w, sigma, p, witnesses);
}

OperatorHandle build_operator(const OperatorSpec& spec, const GridSpec& grid) {
  if (spec.kind == "hilbert") {
    require(grid.dimension() == 1, ErrorKind::kInvalidArgument, "Hilbert rows need d = 1");
    return {"hilbert", [](const StepFunction& f) { return hilbert_direct(f); },
            [](const StepFunction& f) { return -1.0 * hilbert_direct(f); }, true};
  }
  if (spec.kind == "maximal") {
    return {"maximal", [](const StepFunction& f) { return maximal_function(f); }, {}, false};
  }
  HaarShift shift = [&] {
    if (spec.kind == "petermichl") return build_petermichl(grid);
    if (spec.kind == "random-shift") return build_random_shift(spec.m, spec.n, spec.seed, grid, spec.cancellative);
    if (spec.kind == "paraproduct") {
      // Carleson coefficients: a_Q = u_Q sqrt|Q| on the chain [0, 2^-k).
      Rng rng(spec.seed);
      std::map<DyadicCube, double> a;
      for (int k = 0; k < grid.finest_level(); ++k) {
        const DyadicCube q = DyadicCube::from_code(grid.dimension(), k, 0);
        a[q] = rng.uniform(-1.0, 1.0) * std::sqrt(q.volume());
      }
      return build_paraproduct(a, grid);
    }
    fail(ErrorKind::kInvalidArgument, "unknown operator kind '" + spec.kind + "'");
  }();
  return spec.truncated ? truncation_operator(shift) : shift_operator(shift);
}

namespace {

SweepRow sweep_row(const SweepSpec& spec, const WeightSpec& ws, double p, int level) {
  const GridSpec grid(1, level);
  const Weight w = family_weight(ws.family, grid, ws.param, ws.seed);
  const Weight sigma = dual_weight(w, p);
  SweepRow row;
  row.family = ws.family;
  row.param = ws.param;
  row.p = p;
  row.N = level;
  row.joint_ap = joint_ap(w, sigma, p).value;
  row.ainfty_w = ainfty_characteristic(w).value;
  row.ainfty_sigma = ainfty_characteristic(sigma).value;
  const double pp = dual_exponent(p);

  const OperatorHandle op = build_operator(spec.op, grid);
  const std::uint64_t seed = stream_seed(spec.seed, static_cast<std::uint64_t>(level));
  if (p == 2.0 && op.linear && op.apply_transpose) {
    row.norm = norm_p2(op, w, sigma).lower_bound;
  } else {
    std::vector<StepFunction> extra;
    if (!op.linear && spec.op.kind != "maximal") {
      // S_natural dominates |S| pointwise: start from the linear shift's witness.
      OperatorSpec linear = spec.op;
      linear.truncated = false;
      const OperatorHandle lin = build_operator(linear, grid);
      extra.push_back(p == 2.0 ? norm_p2(lin, w, sigma).witness
                               : norm_lp_lower(lin, w, sigma, p, spec.budget, seed).witness);
    }
    row.norm = norm_lp_lower(op, w, sigma, p, spec.budget, seed, extra).lower_bound;
  }
  if (spec.op.kind == "maximal") {
    row.rhs = row.joint_ap * std::pow(row.ainfty_sigma, 1.0 / p);
  } else {
    row.rhs = row.joint_ap * std::max(std::pow(row.ainfty_w, 1.0 / pp), std::pow(row.ainfty_sigma, 1.0 / p));
  }
  row.ratio = row.norm / row.rhs;
  row.buckley_rhs = std::pow(std::pow(row.joint_ap, p), std::max(1.0, 1.0 / (p - 1.0)));
  return row;
}

}  // namespace

std::vector<SweepRow> sharpness_sweep(const SweepSpec& spec) {
  require(!spec.weights.empty() && !spec.ps.empty() && !spec.levels.empty(), ErrorKind::kInvalidArgument,
          "sweep needs weights, exponents and levels");
  struct Job {
    const WeightSpec* weight;
    double p;
    int level;
  };
  std::vector<Job> jobs;
  for (const WeightSpec& w : spec.weights) {
    for (double p : spec.ps) {
      for (int n : spec.levels) jobs.push_back({&w, p, n});
    }
  }
  std::vector<SweepRow> rows(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Job& j = jobs[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = sweep_row(spec, *j.weight, j.p, j.level);
  }
  return rows;
}

std::vector<SweepSpec> default_sweep(std::uint64_t seed) {
  std::vector<WeightSpec> weights;
  for (double alpha : {-0.9, -0.8, -0.7, -0.6, -0.5, -0.4, -0.3, -0.2, -0.1, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    weights.push_back({"power", alpha, 0});
  }
  for (double r : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) weights.push_back({"two-value", r, 0});
  std::vector<SweepSpec> out;
  OperatorSpec petermichl{"petermichl", 1, 0, 0, true, true};
  out.push_back({petermichl, weights, {1.5, 2.0, 3.0}, {8, 10}, 4, seed});
  for (std::uint64_t s : {stream_seed(seed, 1), stream_seed(seed, 2)}) {
    out.push_back({OperatorSpec{"random-shift", 2, 2, s, true, true}, weights, {1.5, 2.0, 3.0}, {8, 10}, 4, seed});
  }
  return out;
}

}  // namespace czlab
