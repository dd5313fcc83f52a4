#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "czlab/characteristics.hpp"
#include "czlab/dyadics.hpp"

namespace czlab::detail {

// Evaluates `value(level, code)` on every cube of the grid (levels run in
// parallel over codes) and returns the maximum. Ties go to the smallest
// (level, code), which is the first one met in level-major order.
template <class ValueFn>
CharacteristicReport supremum_over_cubes(const GridSpec& grid, ValueFn&& value) {
  CharacteristicReport best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<double> buffer;
  for (int k = 0; k <= grid.finest_level(); ++k) {
    const auto count = static_cast<std::ptrdiff_t>(grid.cube_count(k));
    buffer.assign(static_cast<std::size_t>(count), 0.0);
#pragma omp parallel for schedule(static) if (count > 1024)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      buffer[static_cast<std::size_t>(c)] = value(k, static_cast<std::uint64_t>(c));
    }
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      if (buffer[static_cast<std::size_t>(c)] > best.value) {
        best.value = buffer[static_cast<std::size_t>(c)];
        best.witness = DyadicCube::from_code(grid.dimension(), k, static_cast<std::uint64_t>(c));
      }
    }
  }
  return best;
}

// d-dimensional summed-area table over the finest cells in row-major order.
class BoxSums {
 public:
  BoxSums(const GridSpec& grid, std::span<const double> zorder_values);

  // Sum over the half-open cell box [lo, hi).
  double sum(const std::int64_t* lo, const std::int64_t* hi) const;
  std::int64_t side() const noexcept { return side_; }
  int dimension() const noexcept { return dim_; }

 private:
  int dim_;
  std::int64_t side_;
  std::vector<double> table_;  // (side+1)^d entries
};

// max over r >= 0 of sum(window_r(x) ∩ box) / (2r+1)^d, window_r(x) the cube
// of cells within Chebyshev distance r of x; box = [lo, lo + extent)^d.
double centered_window_max(const BoxSums& sums, const std::int64_t* x, const std::int64_t* lo,
                           std::int64_t extent);

}  // namespace czlab::detail
