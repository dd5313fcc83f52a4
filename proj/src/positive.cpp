#include "czlab/positive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "czlab/characteristics.hpp"
#include "czlab/error.hpp"
#include "detail/cube_scan.hpp"

namespace czlab {

CubeFamily::CubeFamily(GridSpec grid, std::vector<DyadicCube> cubes, std::vector<int> generations)
    : grid_(std::move(grid)) {
  require(generations.empty() || generations.size() == cubes.size(), ErrorKind::kInvalidArgument,
          "generation labels must match the cubes");
  std::vector<std::size_t> order(cubes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cubes[a] < cubes[b]; });
  for (std::size_t i : order) {
    check_membership(grid_, cubes[i]);
    if (!cubes_.empty() && cubes_.back() == cubes[i]) continue;
    cubes_.push_back(cubes[i]);
    if (!generations.empty()) generations_.push_back(generations[i]);
  }
}

bool CubeFamily::contains(const DyadicCube& cube) const {
  return std::binary_search(cubes_.begin(), cubes_.end(), cube);
}

CubeFamily CubeFamily::generation_subfamily(int period, int residue) const {
  require(period >= 1, ErrorKind::kInvalidArgument, "period must be positive");
  require(!generations_.empty(), ErrorKind::kInvalidArgument, "family carries no generation labels");
  std::vector<DyadicCube> cubes;
  std::vector<int> labels;
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    if (((generations_[i] % period) + period) % period == ((residue % period) + period) % period) {
      cubes.push_back(cubes_[i]);
      labels.push_back(generations_[i]);
    }
  }
  return CubeFamily(grid_, std::move(cubes), std::move(labels));
}

TauCoefficients::TauCoefficients(GridSpec grid) : grid_(std::move(grid)) {
  levels_.resize(static_cast<std::size_t>(grid_.finest_level()) + 1);
  for (int k = 0; k <= grid_.finest_level(); ++k) levels_[static_cast<std::size_t>(k)].assign(grid_.cube_count(k), 0.0);
}

void TauCoefficients::set(const DyadicCube& cube, double tau) {
  check_membership(grid_, cube);
  require(std::isfinite(tau) && tau >= 0.0, ErrorKind::kInvalidArgument, "tau must be finite and non-negative");
  levels_[static_cast<std::size_t>(cube.level())][cube.code()] = tau;
}

double TauCoefficients::get(const DyadicCube& cube) const {
  check_membership(grid_, cube);
  return get(cube.level(), cube.code());
}

std::vector<std::pair<DyadicCube, double>> TauCoefficients::nonzero() const {
  std::vector<std::pair<DyadicCube, double>> out;
  for (int k = 0; k <= grid_.finest_level(); ++k) {
    const auto& row = levels_[static_cast<std::size_t>(k)];
    for (std::uint64_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0) out.emplace_back(DyadicCube::from_code(grid_.dimension(), k, c), row[c]);
    }
  }
  return out;
}

TauCoefficients TauCoefficients::indicator(const CubeFamily& family) {
  TauCoefficients tau(family.grid());
  for (const DyadicCube& q : family.cubes()) tau.set(q, 1.0);
  return tau;
}

StepFunction apply_positive(const TauCoefficients& tau, const Weight& mu, const StepFunction& f) {
  check_same_grid(tau.grid(), mu.grid());
  check_same_grid(tau.grid(), f.grid());
  const GridSpec& grid = f.grid();
  const CubeSums sums(pointwise_product(f, mu.density()));
  const int d = grid.dimension();
  const int n = grid.finest_level();
  std::vector<double> out(grid.cell_count(), 0.0);
  const auto cells = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (cells > 4096)
  for (std::ptrdiff_t x = 0; x < cells; ++x) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      const std::uint64_t c = static_cast<std::uint64_t>(x) >> (d * (n - k));
      const double t = tau.get(k, c);
      if (t != 0.0) s += t * sums.average(k, c);
    }
    out[static_cast<std::size_t>(x)] = s;
  }
  return StepFunction(grid, std::move(out));
}

TestingReport testing_constant(const TauCoefficients& tau, const Weight& u, const Weight& v, double q) {
  check_same_grid(tau.grid(), u.grid());
  check_same_grid(tau.grid(), v.grid());
  require(std::isfinite(q) && q >= 1.0, ErrorKind::kInvalidArgument, "testing exponent must be finite and >= 1");
  const GridSpec& grid = u.grid();
  const int n = grid.finest_level();
  const double vol = grid.cell_volume();
  const CubeSums us(u.density());

  // partial[x] = sum over cubes Q containing x with level >= k of tau_Q E_Q u,
  // i.e. the localized operator on the level-k cube R containing x.
  std::vector<double> partial(grid.cell_count(), 0.0);
  std::vector<std::vector<double>> ratio(static_cast<std::size_t>(n) + 1);
  for (int k = n; k >= 0; --k) {
    const auto count = static_cast<std::ptrdiff_t>(grid.cube_count(k));
    const std::size_t span = grid.cells_per_cube(k);
    auto& out = ratio[static_cast<std::size_t>(k)];
    out.assign(static_cast<std::size_t>(count), 0.0);
#pragma omp parallel for schedule(static) if (count > 256)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      const auto code = static_cast<std::uint64_t>(c);
      const double add = tau.get(k, code) * us.average(k, code);
      const std::size_t begin = static_cast<std::size_t>(c) * span;
      double norm_q = 0.0;
      for (std::size_t x = begin; x < begin + span; ++x) {
        partial[x] += add;
        norm_q += std::pow(partial[x], q) * v[x];
      }
      out[static_cast<std::size_t>(c)] = std::pow(norm_q * vol, 1.0 / q) / std::pow(us.sum(k, code) * vol, 1.0 / q);
    }
  }
  const auto best = detail::supremum_over_cubes(grid, [&](int k, std::uint64_t c) {
    return ratio[static_cast<std::size_t>(k)][c];
  });
  return {best.value, best.witness};
}

namespace {

constexpr std::size_t kIndicatorTestingMaxCells = 256;

TestingReport indicator_testing(const TauCoefficients& tau, const Weight& w, const Weight& sigma, double pp) {
  const GridSpec& grid = w.grid();
  require(grid.cell_count() <= kIndicatorTestingMaxCells, ErrorKind::kPrecondition,
          "indicator testing is limited to tiny grids");
  TestingReport best;
  best.value = -1.0;
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (std::uint64_t c = 0; c < grid.cube_count(k); ++c) {
      const auto r = DyadicCube::from_code(grid.dimension(), k, c);
      TauCoefficients local(grid);
      for (const auto& [q, t] : tau.nonzero()) {
        if (r.contains(q)) local.set(q, t);
      }
      for (int j = k; j <= grid.finest_level(); ++j) {
        const std::uint64_t first = c << (grid.dimension() * (j - k));
        const std::uint64_t last = (c + 1) << (grid.dimension() * (j - k));
        for (std::uint64_t s = first; s < last; ++s) {
          const auto rp = DyadicCube::from_code(grid.dimension(), j, s);
          const StepFunction input = StepFunction::indicator(grid, rp);
          const StepFunction out = apply_positive(local, w, input);
          const double value = lp_norm(out, pp, sigma) / std::pow(measure(w, rp), 1.0 / pp);
          if (value > best.value) {
            best.value = value;
            best.witness = r;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

TestingReport sawyer_testing(const TauCoefficients& tau, const Weight& w, const Weight& sigma, double p,
                             TestingInput input) {
  const double pp = dual_exponent(p);
  if (input == TestingInput::kIndicators) return indicator_testing(tau, w, sigma, pp);
  return testing_constant(tau, w, sigma, pp);
}

SawyerReport strong_norm_bound(const TauCoefficients& tau, const Weight& w, const Weight& sigma, double p) {
  SawyerReport r;
  r.t_pprime = testing_constant(tau, w, sigma, dual_exponent(p));
  r.t_p = testing_constant(tau, sigma, w, p);
  r.proxy = r.t_pprime.value + r.t_p.value;
  return r;
}

double lambda_constant(const CubeFamily& family) {
  require(!family.empty(), ErrorKind::kInvalidArgument, "lambda_constant of an empty family");
  const GridSpec& grid = family.grid();
  const int d = grid.dimension();
  const int n = grid.finest_level();

  std::vector<std::vector<char>> member(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) member[static_cast<std::size_t>(k)].assign(grid.cube_count(k), 0);
  for (const DyadicCube& q : family.cubes()) member[static_cast<std::size_t>(q.level())][q.code()] = 1;

  // hist[i][c] = |{x in Q_i : c members strictly inside Q_i contain x}| / |Q_i|.
  const auto& cubes = family.cubes();
  std::vector<std::vector<double>> hist(cubes.size());
  const auto count = static_cast<std::ptrdiff_t>(cubes.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const DyadicCube& q = cubes[static_cast<std::size_t>(i)];
    const auto range = cell_range(grid, q);
    std::vector<double> h(static_cast<std::size_t>(n - q.level()) + 1, 0.0);
    for (std::size_t x = range.begin; x < range.end; ++x) {
      int c = 0;
      for (int k = q.level() + 1; k <= n; ++k) c += member[static_cast<std::size_t>(k)][x >> (d * (n - k))];
      h[static_cast<std::size_t>(c)] += 1.0;
    }
    for (double& v : h) v /= static_cast<double>(range.size());
    hist[static_cast<std::size_t>(i)] = std::move(h);
  }

  bool nested = false;
  for (const auto& h : hist) {
    for (std::size_t c = 1; c < h.size(); ++c) nested = nested || h[c] > 0.0;
  }
  if (!nested) return kLambdaFloor;

  const auto moment = [&](double lambda) {
    double worst = 0.0;
    for (const auto& h : hist) {
      double s = 0.0;
      for (std::size_t c = 0; c < h.size(); ++c) {
        if (h[c] > 0.0) s += h[c] * std::exp(static_cast<double>(c) / lambda);
      }
      worst = std::max(worst, s);
    }
    return worst;
  };
  constexpr double kBound = 2.0;
  if (moment(kLambdaFloor) <= kBound) return kLambdaFloor;
  double hi = 1.0;
  while (moment(hi) > kBound) hi *= 2.0;
  double lo = hi / 2.0;
  while (lo > kLambdaFloor && moment(lo) <= kBound) lo /= 2.0;
  lo = std::max(lo, kLambdaFloor);
  for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-6; ++it) {
    const double mid = std::sqrt(lo * hi);
    (moment(mid) > kBound ? lo : hi) = mid;
  }
  return hi;
}

StepFunction type_l_apply(const CubeFamily& family, const Weight& mu, const StepFunction& f) {
  return apply_positive(TauCoefficients::indicator(family), mu, f);
}

}  // namespace czlab
