#include "czlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "czlab/error.hpp"
#include "czlab/random.hpp"

namespace czlab {

namespace {

// Primitive of |x - x0|^alpha.
double power_primitive(double x, double x0, double alpha) {
  const double t = x - x0;
  const double v = std::pow(std::abs(t), alpha + 1.0) / (alpha + 1.0);
  return t < 0.0 ? -v : v;
}

}  // namespace

Weight power_weight(const GridSpec& grid, double alpha, double x0) {
  require(grid.dimension() == 1, ErrorKind::kInvalidArgument, "power weights need d = 1");
  require(std::isfinite(alpha) && alpha > -1.0, ErrorKind::kInvalidArgument, "power weight needs alpha > -1");
  const std::size_t n = grid.cell_count();
  const double h = 1.0 / static_cast<double>(n);
  const double snapped = std::round(std::clamp(x0, 0.0, 1.0) * static_cast<double>(n)) * h;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) * h;
    v[i] = (power_primitive(a + h, snapped, alpha) - power_primitive(a, snapped, alpha)) / h;
  }
  const double smallest = *std::min_element(v.begin(), v.end());
  require(smallest > 1e-12 && std::isfinite(*std::max_element(v.begin(), v.end())), ErrorKind::kNonpositiveWeight,
          "power weight degenerates on this grid");
  return Weight(StepFunction(grid, std::move(v)));
}

Weight two_value_weight(const GridSpec& grid, double ratio) {
  require(std::isfinite(ratio) && ratio > 0.0, ErrorKind::kNonpositiveWeight, "two-value ratio must be positive");
  std::vector<double> v(grid.cell_count(), 1.0);
  // The first coordinate's top bit is bit 0 of the level-1 code.
  const int shift = grid.dimension() * grid.finest_level() - grid.dimension();
  if (grid.finest_level() == 0) return Weight(StepFunction(grid, std::vector<double>(1, (ratio + 1.0) / 2.0)));
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (((x >> shift) & 1u) == 0) v[x] = ratio;
  }
  return Weight(StepFunction(grid, std::move(v)));
}

Weight cascade_weight(const GridSpec& grid, double delta, std::uint64_t seed) {
  require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0, ErrorKind::kInvalidArgument,
          "cascade delta must lie in [0, 1)");
  const int d = grid.dimension();
  const int kids = grid.children_per_cube();
  std::vector<double> level{1.0};
  for (int k = 0; k < grid.finest_level(); ++k) {
    std::vector<double> next(level.size() * static_cast<std::size_t>(kids));
    for (std::uint64_t c = 0; c < level.size(); ++c) {
      Rng rng(stream_seed(seed, (std::uint64_t{1} << (d * k)) + c));
      std::vector<int> signs(static_cast<std::size_t>(kids));
      for (int i = 0; i < kids; ++i) signs[static_cast<std::size_t>(i)] = i < kids / 2 ? 1 : -1;
      // Fisher-Yates with the portable generator.
      for (int i = kids - 1; i > 0; --i) {
        std::swap(signs[static_cast<std::size_t>(i)], signs[rng.below(static_cast<std::uint64_t>(i) + 1)]);
      }
      for (int i = 0; i < kids; ++i) {
        next[(c << d) | static_cast<std::uint64_t>(i)] = level[c] * (1.0 + delta * signs[static_cast<std::size_t>(i)]);
      }
    }
    level = std::move(next);
  }
  return Weight(StepFunction(grid, std::move(level)));
}

Weight family_weight(const std::string& family, const GridSpec& grid, double param, std::uint64_t seed) {
  if (family == "power") return power_weight(grid, param);
  if (family == "two-value") return two_value_weight(grid, param);
  if (family == "cascade") return cascade_weight(grid, param, seed);
  if (family == "constant") return Weight::constant(grid, param);
  fail(ErrorKind::kInvalidArgument, "unknown weight family '" + family + "'");
}

}  // namespace czlab
