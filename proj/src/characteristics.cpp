#include "czlab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "czlab/error.hpp"
#include "detail/cube_scan.hpp"

namespace czlab {

namespace detail {

BoxSums::BoxSums(const GridSpec& grid, std::span<const double> zorder_values)
    : dim_(grid.dimension()), side_(std::int64_t{1} << grid.finest_level()) {
  const std::int64_t stride = side_ + 1;
  std::size_t total = 1;
  for (int i = 0; i < dim_; ++i) total *= static_cast<std::size_t>(stride);
  table_.assign(total, 0.0);
  for (std::size_t z = 0; z < zorder_values.size(); ++z) {
    const auto c = deinterleave_bits(z, dim_, grid.finest_level());
    std::size_t idx = 0;
    std::size_t mul = 1;
    for (int i = 0; i < dim_; ++i) {
      idx += (static_cast<std::size_t>(c[static_cast<std::size_t>(i)]) + 1) * mul;
      mul *= static_cast<std::size_t>(stride);
    }
    table_[idx] = zorder_values[z];
  }
  std::size_t axis_stride = 1;
  for (int axis = 0; axis < dim_; ++axis) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      const auto coord = static_cast<std::int64_t>((idx / axis_stride) % static_cast<std::size_t>(stride));
      if (coord > 0) table_[idx] += table_[idx - axis_stride];
    }
    axis_stride *= static_cast<std::size_t>(stride);
  }
}

double BoxSums::sum(const std::int64_t* lo, const std::int64_t* hi) const {
  const std::int64_t stride = side_ + 1;
  double s = 0.0;
  for (int mask = 0; mask < (1 << dim_); ++mask) {
    std::size_t idx = 0;
    std::size_t mul = 1;
    int lows = 0;
    for (int i = 0; i < dim_; ++i) {
      const bool use_lo = (mask >> i) & 1;
      lows += use_lo ? 1 : 0;
      idx += static_cast<std::size_t>(use_lo ? lo[i] : hi[i]) * mul;
      mul *= static_cast<std::size_t>(stride);
    }
    s += (lows % 2 == 0) ? table_[idx] : -table_[idx];
  }
  return s;
}

double centered_window_max(const BoxSums& sums, const std::int64_t* x, const std::int64_t* lo,
                           std::int64_t extent) {
  const int d = sums.dimension();
  std::int64_t wlo[kMaxDimension];
  std::int64_t whi[kMaxDimension];
  double best = 0.0;
  for (std::int64_t r = 0; r < extent; ++r) {
    for (int i = 0; i < d; ++i) {
      wlo[i] = std::max(x[i] - r, lo[i]);
      whi[i] = std::min(x[i] + r + 1, lo[i] + extent);
    }
    const double vol = std::pow(static_cast<double>(2 * r + 1), d);
    best = std::max(best, sums.sum(wlo, whi) / vol);
  }
  return best;
}

}  // namespace detail

double dual_exponent(double p) {
  require(std::isfinite(p) && p > 1.0, ErrorKind::kInvalidArgument, "exponent must satisfy 1 < p < inf");
  return p / (p - 1.0);
}

Weight dual_weight(const Weight& w, double p) {
  const double exponent = 1.0 - dual_exponent(p);
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(w[i], exponent);
  return Weight(StepFunction(w.grid(), std::move(v)));
}

double joint_ap_value_on(const Weight& w, const Weight& sigma, double p, const DyadicCube& cube) {
  const double pp = dual_exponent(p);
  return std::pow(average(w.density(), cube), 1.0 / p) * std::pow(average(sigma.density(), cube), 1.0 / pp);
}

double ap_value_on(const Weight& w, double p, const DyadicCube& cube) {
  const Weight sigma = dual_weight(w, p);
  return average(w.density(), cube) * std::pow(average(sigma.density(), cube), p - 1.0);
}

CharacteristicReport ap_characteristic(const Weight& w, double p) {
  const Weight sigma = dual_weight(w, p);
  const CubeSums ws(w.density());
  const CubeSums ss(sigma.density());
  auto report = detail::supremum_over_cubes(w.grid(), [&](int k, std::uint64_t c) {
    return ws.average(k, c) * std::pow(ss.average(k, c), p - 1.0);
  });
  report.p = p;
  return report;
}

CharacteristicReport joint_ap(const Weight& w, const Weight& sigma, double p) {
  check_same_grid(w.grid(), sigma.grid());
  const double pp = dual_exponent(p);
  const CubeSums ws(w.density());
  const CubeSums ss(sigma.density());
  auto report = detail::supremum_over_cubes(w.grid(), [&](int k, std::uint64_t c) {
    return std::pow(ws.average(k, c), 1.0 / p) * std::pow(ss.average(k, c), 1.0 / pp);
  });
  report.p = p;
  return report;
}

namespace {

// int_Q M^D(w 1_Q) / w(Q) for every cube, via a per-cell running maximum of
// ancestor averages taken from the finest level upward.
CharacteristicReport ainfty_dyadic(const Weight& w) {
  const GridSpec& grid = w.grid();
  const int n = grid.finest_level();
  const CubeSums sums(w.density());
  std::vector<double> running(grid.cell_count(), 0.0);
  std::vector<std::vector<double>> ratio(static_cast<std::size_t>(n) + 1);
  for (int k = n; k >= 0; --k) {
    const auto count = static_cast<std::ptrdiff_t>(grid.cube_count(k));
    const auto span = grid.cells_per_cube(k);
    auto& out = ratio[static_cast<std::size_t>(k)];
    out.assign(static_cast<std::size_t>(count), 0.0);
#pragma omp parallel for schedule(static) if (count > 256)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      const double avg = sums.average(k, static_cast<std::uint64_t>(c));
      const std::size_t begin = static_cast<std::size_t>(c) * span;
      double integral_cells = 0.0;
      for (std::size_t x = begin; x < begin + span; ++x) {
        running[x] = std::max(running[x], avg);
        integral_cells += running[x];
      }
      out[static_cast<std::size_t>(c)] = integral_cells / sums.sum(k, static_cast<std::uint64_t>(c));
    }
  }
  auto report = detail::supremum_over_cubes(grid, [&](int k, std::uint64_t c) {
    return ratio[static_cast<std::size_t>(k)][c];
  });
  report.p = std::numeric_limits<double>::infinity();
  return report;
}

double centered_integral_on(const detail::BoxSums& box, const GridSpec& grid, const DyadicCube& cube) {
  const int d = grid.dimension();
  const auto coords = cube.coords();
  const std::int64_t extent = std::int64_t{1} << (grid.finest_level() - cube.level());
  std::int64_t lo[kMaxDimension];
  for (int i = 0; i < d; ++i) lo[i] = static_cast<std::int64_t>(coords[static_cast<std::size_t>(i)]) * extent;
  const auto range = cell_range(grid, cube);
  double total = 0.0;
  for (std::size_t z = range.begin; z < range.end; ++z) {
    const auto c = deinterleave_bits(z, d, grid.finest_level());
    std::int64_t x[kMaxDimension];
    for (int i = 0; i < d; ++i) x[i] = c[static_cast<std::size_t>(i)];
    total += detail::centered_window_max(box, x, lo, extent);
  }
  return total;
}

CharacteristicReport ainfty_centered(const Weight& w) {
  const GridSpec& grid = w.grid();
  const detail::BoxSums box(grid, w.values());
  const CubeSums sums(w.density());
  auto report = detail::supremum_over_cubes(grid, [&](int k, std::uint64_t c) {
    const auto cube = DyadicCube::from_code(grid.dimension(), k, c);
    return centered_integral_on(box, grid, cube) / sums.sum(k, c);
  });
  report.p = std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace

CharacteristicReport ainfty_characteristic(const Weight& w, MaximalMode mode) {
  return mode == MaximalMode::kDyadic ? ainfty_dyadic(w) : ainfty_centered(w);
}

double ainfty_value_on(const Weight& w, const DyadicCube& cube, MaximalMode mode) {
  const GridSpec& grid = w.grid();
  check_membership(grid, cube);
  if (mode == MaximalMode::kCentered) {
    const detail::BoxSums box(grid, w.values());
    return centered_integral_on(box, grid, cube) / (integral(w.density(), cube) / grid.cell_volume());
  }
  const auto range = cell_range(grid, cube);
  double total = 0.0;
  for (std::size_t x = range.begin; x < range.end; ++x) {
    double best = 0.0;
    for (int k = cube.level(); k <= grid.finest_level(); ++k) {
      best = std::max(best, average(w.density(), cube_containing_cell(grid, x, k)));
    }
    total += best;
  }
  return total * grid.cell_volume() / measure(w, cube);
}

StepFunction maximal_function(const StepFunction& f, MaximalMode mode) {
  const GridSpec& grid = f.grid();
  const StepFunction mag = absolute(f);
  std::vector<double> out(grid.cell_count(), 0.0);
  const auto cells = static_cast<std::ptrdiff_t>(grid.cell_count());
  if (mode == MaximalMode::kDyadic) {
    const CubeSums sums(mag);
    const int n = grid.finest_level();
    const int d = grid.dimension();
#pragma omp parallel for schedule(static) if (cells > 4096)
    for (std::ptrdiff_t x = 0; x < cells; ++x) {
      double best = 0.0;
      for (int k = 0; k <= n; ++k) {
        best = std::max(best, sums.average(k, static_cast<std::uint64_t>(x) >> (d * (n - k))));
      }
      out[static_cast<std::size_t>(x)] = best;
    }
  } else {
    const detail::BoxSums box(grid, mag.values());
    const int d = grid.dimension();
    const std::int64_t extent = box.side();
    const std::int64_t lo[kMaxDimension] = {0, 0, 0};
#pragma omp parallel for schedule(dynamic, 64) if (cells > 256)
    for (std::ptrdiff_t z = 0; z < cells; ++z) {
      const auto c = deinterleave_bits(static_cast<std::uint64_t>(z), d, grid.finest_level());
      std::int64_t x[kMaxDimension];
      for (int i = 0; i < d; ++i) x[i] = c[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(z)] = detail::centered_window_max(box, x, lo, extent + 1);
    }
  }
  return StepFunction(grid, std::move(out));
}

}  // namespace czlab
