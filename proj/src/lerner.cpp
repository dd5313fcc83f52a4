#include "czlab/lerner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "czlab/error.hpp"

namespace czlab {

namespace {

void require_fraction(double lambda) {
  require(lambda > 0.0 && lambda < 1.0, ErrorKind::kInvalidArgument, "lambda must lie in (0, 1)");
}

std::vector<double> sorted_values(const StepFunction& phi, const DyadicCube& cube) {
  check_membership(phi.grid(), cube);
  const auto range = cell_range(phi.grid(), cube);
  std::vector<double> v(phi.values().begin() + static_cast<std::ptrdiff_t>(range.begin),
                        phi.values().begin() + static_cast<std::ptrdiff_t>(range.end));
  std::sort(v.begin(), v.end());
  return v;
}

double lower_median_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && v[j] == v[i]) ++j;
    // count(<) = i, count(>) = n - j
    if (2 * i <= n && 2 * (n - j) <= n) return v[i];
    i = j;
  }
  return v.back();
}

// Number of cells allowed to exceed the threshold at t = lambda |Q|.
std::size_t allowed_cells(std::size_t n, double lambda) {
  return static_cast<std::size_t>(std::floor(lambda * static_cast<double>(n) + 1e-9));
}

double oscillation_sorted(const std::vector<double>& v, double lambda) {
  const std::size_t n = v.size();
  const std::size_t k = allowed_cells(n, lambda);
  if (k >= n) return 0.0;
  const std::size_t keep = n - k;
  if (keep <= 1) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + keep <= n; ++i) best = std::min(best, (v[i + keep - 1] - v[i]) / 2.0);
  return best;
}

}  // namespace

double median(const StepFunction& phi, const DyadicCube& cube) { return lower_median_sorted(sorted_values(phi, cube)); }

double oscillation(const StepFunction& phi, const DyadicCube& cube, double lambda) {
  require_fraction(lambda);
  return oscillation_sorted(sorted_values(phi, cube), lambda);
}

namespace {

// omega_lambda on every dyadic subcube of `cube`, level by level relative to
// it: result[j][i] is the i-th subcube at depth j in Z-order.
std::vector<std::vector<double>> subcube_oscillations(const StepFunction& phi, const DyadicCube& cube,
                                                      double lambda) {
  const GridSpec& grid = phi.grid();
  check_membership(grid, cube);
  const int d = grid.dimension();
  const int depth = grid.finest_level() - cube.level();
  const auto range = cell_range(grid, cube);
  std::vector<double> seg(phi.values().begin() + static_cast<std::ptrdiff_t>(range.begin),
                          phi.values().begin() + static_cast<std::ptrdiff_t>(range.end));
  std::vector<double> scratch(seg.size());
  std::vector<std::vector<double>> out(static_cast<std::size_t>(depth) + 1);
  out[static_cast<std::size_t>(depth)].assign(seg.size(), 0.0);
  std::size_t width = 1;
  for (int j = depth - 1; j >= 0; --j) {
    const std::size_t next = width << d;
    const auto count = static_cast<std::ptrdiff_t>(seg.size() / next);
    auto& row = out[static_cast<std::size_t>(j)];
    row.assign(static_cast<std::size_t>(count), 0.0);
#pragma omp parallel for schedule(static) if (count > 64)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const std::size_t begin = static_cast<std::size_t>(i) * next;
      // Merge 2^d sorted runs of length `width` pairwise.
      std::copy(seg.begin() + static_cast<std::ptrdiff_t>(begin),
                seg.begin() + static_cast<std::ptrdiff_t>(begin + next),
                scratch.begin() + static_cast<std::ptrdiff_t>(begin));
      for (std::size_t run = width; run < next; run *= 2) {
        for (std::size_t s = begin; s < begin + next; s += 2 * run) {
          std::inplace_merge(scratch.begin() + static_cast<std::ptrdiff_t>(s),
                             scratch.begin() + static_cast<std::ptrdiff_t>(s + run),
                             scratch.begin() + static_cast<std::ptrdiff_t>(s + 2 * run));
        }
      }
      std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(begin),
                scratch.begin() + static_cast<std::ptrdiff_t>(begin + next),
                seg.begin() + static_cast<std::ptrdiff_t>(begin));
      const std::vector<double> sorted(seg.begin() + static_cast<std::ptrdiff_t>(begin),
                                       seg.begin() + static_cast<std::ptrdiff_t>(begin + next));
      row[static_cast<std::size_t>(i)] = oscillation_sorted(sorted, lambda);
    }
    width = next;
  }
  return out;
}

}  // namespace

StepFunction local_sharp_maximal(const StepFunction& phi, const DyadicCube& cube, double lambda) {
  require_fraction(lambda);
  const auto osc = subcube_oscillations(phi, cube, lambda);
  const GridSpec& grid = phi.grid();
  const int d = grid.dimension();
  const int depth = grid.finest_level() - cube.level();
  const auto range = cell_range(grid, cube);
  std::vector<double> out(grid.cell_count(), 0.0);
  for (std::size_t x = range.begin; x < range.end; ++x) {
    const std::size_t local = x - range.begin;
    double best = 0.0;
    for (int j = 0; j <= depth; ++j) best = std::max(best, osc[static_cast<std::size_t>(j)][local >> (d * (depth - j))]);
    out[x] = best;
  }
  return StepFunction(grid, std::move(out));
}

namespace {

constexpr double kSharpFraction = 0.25;

struct Selection {
  double omega = 0.0;  // omega_{2^{-d-2}}(phi, Q)
  std::vector<DyadicCube> chosen;
};

// Maximal Q' strictly inside Q with |Q' ∩ E| > 2^{-d-1}|Q'|, where
// E = {x in Q : |phi - m_Q| > ((phi - m_Q) 1_Q)^*(2^{-d-2}|Q|)}.
Selection select_in(const StepFunction& phi, const DyadicCube& q) {
  const GridSpec& grid = phi.grid();
  const int d = grid.dimension();
  const double lambda = std::ldexp(1.0, -d - 2);
  const auto range = cell_range(grid, q);
  const std::vector<double> sorted = sorted_values(phi, q);
  Selection sel;
  sel.omega = oscillation_sorted(sorted, lambda);
  if (q.level() == grid.finest_level()) return sel;

  const double m = lower_median_sorted(sorted);
  std::vector<double> dev(range.size());
  for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(phi[range.begin + i] - m);
  std::vector<double> dev_sorted = dev;
  std::sort(dev_sorted.begin(), dev_sorted.end(), std::greater<>());
  const std::size_t k = allowed_cells(dev.size(), lambda);
  const double threshold = k < dev_sorted.size() ? dev_sorted[k] : 0.0;

  // prefix[i] = |E ∩ first i cells| in cell units.
  std::vector<std::size_t> prefix(dev.size() + 1, 0);
  for (std::size_t i = 0; i < dev.size(); ++i) prefix[i + 1] = prefix[i] + (dev[i] > threshold ? 1 : 0);
  if (prefix.back() == 0) return sel;

  const int depth = grid.finest_level() - q.level();
  struct Frame {
    int j;
    std::size_t index;
  };
  std::vector<Frame> stack;
  for (std::size_t c = grid.children_per_cube(); c-- > 0;) stack.push_back({1, c});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const std::size_t width = std::size_t{1} << (d * (depth - f.j));
    const std::size_t begin = f.index * width;
    const std::size_t hits = prefix[begin + width] - prefix[begin];
    if (hits == 0) continue;
    // hits > 2^{-d-1} width, compared exactly in integers
    if (hits * (std::size_t{2} << d) > width) {
      sel.chosen.push_back(DyadicCube::from_code(d, q.level() + f.j,
                                                 (q.code() << (d * f.j)) | f.index));
      continue;
    }
    if (f.j == depth) continue;
    for (std::size_t c = grid.children_per_cube(); c-- > 0;) stack.push_back({f.j + 1, (f.index << d) | c});
  }
  return sel;
}

void check_decomposition(const GridSpec& grid, const Decomposition& dec) {
  const auto fail_if = [](bool bad, const std::string& what) {
    if (bad) fail(ErrorKind::kInvariantViolation, "median decomposition: " + what);
  };
  std::vector<CellRange> previous{cell_range(grid, dec.q0)};
  for (std::size_t l = 0; l < dec.generations.size(); ++l) {
    std::vector<CellRange> current;
    for (const LernerCube& c : dec.generations[l]) current.push_back(cell_range(grid, c.cube));
    for (std::size_t i = 1; i < current.size(); ++i) {
      fail_if(current[i].begin < current[i - 1].end, "generation " + std::to_string(l + 1) + " is not disjoint");
    }
    // Nesting and the half-measure bound against the previous generation.
    std::size_t j = 0;
    for (const CellRange& parent : previous) {
      std::size_t covered = 0;
      while (j < current.size() && current[j].begin < parent.end) {
        fail_if(current[j].begin < parent.begin || current[j].end > parent.end,
                "generation " + std::to_string(l + 1) + " is not nested in the previous one");
        covered += current[j].size();
        ++j;
      }
      fail_if(2 * covered >= parent.size(), "generation " + std::to_string(l + 1) + " covers half of a parent cube");
    }
    fail_if(j != current.size(), "generation " + std::to_string(l + 1) + " escapes the previous one");
    previous = std::move(current);
  }
}

}  // namespace

Decomposition lerner_decompose(const StepFunction& phi, const DyadicCube& q0) {
  const GridSpec& grid = phi.grid();
  check_membership(grid, q0);
  Decomposition dec;
  dec.q0 = q0;
  dec.median = median(phi, q0);

  std::vector<DyadicCube> current{q0};
  while (!current.empty()) {
    std::vector<Selection> selections(current.size());
    const auto count = static_cast<std::ptrdiff_t>(current.size());
#pragma omp parallel for schedule(dynamic, 4) if (count > 8)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      selections[static_cast<std::size_t>(i)] = select_in(phi, current[static_cast<std::size_t>(i)]);
    }
    std::vector<LernerCube> generation;
    std::vector<DyadicCube> next;
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (const DyadicCube& c : selections[i].chosen) {
        // omega on the dyadic parent of the selected cube
        generation.push_back({c, oscillation(phi, c.parent(), std::ldexp(1.0, -grid.dimension() - 2))});
        next.push_back(c);
      }
    }
    if (generation.empty()) break;
    const auto by_position = [&](const DyadicCube& a, const DyadicCube& b) {
      return cell_range(grid, a).begin < cell_range(grid, b).begin;
    };
    std::sort(generation.begin(), generation.end(),
              [&](const LernerCube& a, const LernerCube& b) { return by_position(a.cube, b.cube); });
    std::sort(next.begin(), next.end(), by_position);
    dec.generations.push_back(std::move(generation));
    current = std::move(next);
  }
  check_decomposition(grid, dec);

  const StepFunction sharp = local_sharp_maximal(phi, q0, kSharpFraction);
  std::vector<double> rhs(sharp.values().begin(), sharp.values().end());
  for (const auto& generation : dec.generations) {
    for (const LernerCube& c : generation) {
      const auto range = cell_range(grid, c.cube);
      for (std::size_t x = range.begin; x < range.end; ++x) rhs[x] += c.omega_parent;
    }
  }
  const auto range = cell_range(grid, q0);
  std::vector<double> residual(grid.cell_count(), 0.0);
  for (std::size_t x = range.begin; x < range.end; ++x) {
    const double lhs = std::abs(phi[x] - dec.median);
    residual[x] = lhs - rhs[x];
    if (lhs > 0.0) {
      dec.lerner_constant = std::max(dec.lerner_constant,
                                     rhs[x] > 0.0 ? lhs / rhs[x] : std::numeric_limits<double>::infinity());
    }
  }
  dec.residual = StepFunction(grid, std::move(residual));
  return dec;
}

CubeFamily lerner_family(const GridSpec& grid, const Decomposition& decomposition) {
  std::vector<DyadicCube> cubes;
  std::vector<int> labels;
  for (std::size_t l = 0; l < decomposition.generations.size(); ++l) {
    for (const LernerCube& c : decomposition.generations[l]) {
      cubes.push_back(c.cube);
      labels.push_back(static_cast<int>(l) + 1);
    }
  }
  return CubeFamily(grid, std::move(cubes), std::move(labels));
}

}  // namespace czlab
