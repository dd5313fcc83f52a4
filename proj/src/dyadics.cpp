#include "czlab/dyadics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "czlab/error.hpp"

namespace czlab {

GridSpec::GridSpec(int dimension, int finest_level, std::vector<double> shift)
    : dimension_(dimension), finest_level_(finest_level), shift_(std::move(shift)) {
  require(dimension_ >= 1 && dimension_ <= kMaxDimension, ErrorKind::kInvalidArgument,
          "grid dimension must be in [1," + std::to_string(kMaxDimension) + "]");
  require(finest_level_ >= 0, ErrorKind::kInvalidArgument, "finest level must be non-negative");
  require(dimension_ * finest_level_ <= kMaxCellBits, ErrorKind::kInvalidArgument,
          "grid too large: d*N exceeds " + std::to_string(kMaxCellBits));
  if (shift_.empty()) shift_.assign(static_cast<std::size_t>(dimension_), 0.0);
  require(shift_.size() == static_cast<std::size_t>(dimension_), ErrorKind::kInvalidArgument,
          "shift must have one entry per dimension");
  for (double s : shift_) {
    require(s >= 0.0 && s < 1.0, ErrorKind::kInvalidArgument, "shift entries must lie in [0,1)");
  }
}

std::size_t GridSpec::cube_count(int level) const {
  require(level >= 0 && level <= finest_level_, ErrorKind::kInvalidArgument, "level outside grid");
  return std::size_t{1} << (dimension_ * level);
}

std::size_t GridSpec::cells_per_cube(int level) const {
  require(level >= 0 && level <= finest_level_, ErrorKind::kInvalidArgument, "level outside grid");
  return std::size_t{1} << (dimension_ * (finest_level_ - level));
}

std::size_t GridSpec::total_cube_count() const {
  std::size_t total = 0;
  for (int k = 0; k <= finest_level_; ++k) total += cube_count(k);
  return total;
}

double GridSpec::cell_volume() const noexcept { return std::ldexp(1.0, -dimension_ * finest_level_); }

std::uint64_t interleave_bits(std::span<const std::uint32_t> coords, int level) {
  const int d = static_cast<int>(coords.size());
  std::uint64_t code = 0;
  for (int b = 0; b < level; ++b) {
    for (int i = 0; i < d; ++i) {
      const std::uint64_t bit = (coords[static_cast<std::size_t>(i)] >> b) & 1U;
      code |= bit << (b * d + i);
    }
  }
  return code;
}

std::vector<std::uint32_t> deinterleave_bits(std::uint64_t code, int dimension, int level) {
  std::vector<std::uint32_t> coords(static_cast<std::size_t>(dimension), 0);
  for (int b = 0; b < level; ++b) {
    for (int i = 0; i < dimension; ++i) {
      const auto bit = static_cast<std::uint32_t>((code >> (b * dimension + i)) & 1U);
      coords[static_cast<std::size_t>(i)] |= bit << b;
    }
  }
  return coords;
}

DyadicCube DyadicCube::root(int dimension) {
  require(dimension >= 1 && dimension <= kMaxDimension, ErrorKind::kInvalidArgument,
          "cube dimension out of range");
  return DyadicCube(dimension, 0, 0);
}

DyadicCube DyadicCube::from_code(int dimension, int level, std::uint64_t code) {
  require(dimension >= 1 && dimension <= kMaxDimension, ErrorKind::kInvalidArgument,
          "cube dimension out of range");
  require(level >= 0 && dimension * level <= 62, ErrorKind::kInvalidArgument, "cube level out of range");
  require(code < (std::uint64_t{1} << (dimension * level)), ErrorKind::kInvalidArgument,
          "cube code out of range for its level");
  return DyadicCube(dimension, level, code);
}

DyadicCube DyadicCube::from_coords(int level, std::span<const std::uint32_t> coords) {
  const int d = static_cast<int>(coords.size());
  require(d >= 1 && d <= kMaxDimension, ErrorKind::kInvalidArgument, "cube dimension out of range");
  require(level >= 0 && level < 32, ErrorKind::kInvalidArgument, "cube level out of range");
  for (auto c : coords) {
    require(static_cast<std::uint64_t>(c) < (std::uint64_t{1} << level), ErrorKind::kInvalidArgument,
            "cube coordinate out of range for its level");
  }
  return DyadicCube(d, level, interleave_bits(coords, level));
}

std::vector<std::uint32_t> DyadicCube::coords() const { return deinterleave_bits(code_, dimension_, level_); }

double DyadicCube::side_length() const noexcept { return std::ldexp(1.0, -level_); }

double DyadicCube::volume() const noexcept { return std::ldexp(1.0, -dimension_ * level_); }

DyadicCube DyadicCube::parent() const {
  require(level_ > 0, ErrorKind::kAboveRoot, "the root cube has no parent");
  return DyadicCube(dimension_, level_ - 1, code_ >> dimension_);
}

DyadicCube DyadicCube::child(unsigned index) const {
  require(index < (1U << dimension_), ErrorKind::kInvalidArgument, "child index out of range");
  return DyadicCube(dimension_, level_ + 1, (code_ << dimension_) | index);
}

bool DyadicCube::contains(const DyadicCube& other) const noexcept {
  if (other.dimension_ != dimension_ || other.level_ < level_) return false;
  return (other.code_ >> (dimension_ * (other.level_ - level_))) == code_;
}

bool belongs_to(const GridSpec& grid, const DyadicCube& cube) noexcept {
  return cube.dimension() == grid.dimension() && cube.level() >= 0 && cube.level() <= grid.finest_level();
}

void check_membership(const GridSpec& grid, const DyadicCube& cube) {
  require(belongs_to(grid, cube), ErrorKind::kGridMismatch,
          "cube (level " + std::to_string(cube.level()) + ", dimension " + std::to_string(cube.dimension()) +
              ") does not belong to the grid");
}

CellRange cell_range(const GridSpec& grid, const DyadicCube& cube) {
  check_membership(grid, cube);
  const int shift = grid.dimension() * (grid.finest_level() - cube.level());
  const auto begin = static_cast<std::size_t>(cube.code() << shift);
  return {begin, begin + (std::size_t{1} << shift)};
}

DyadicCube cell_cube(const GridSpec& grid, std::size_t cell) {
  require(cell < grid.cell_count(), ErrorKind::kInvalidArgument, "cell index out of range");
  return DyadicCube::from_code(grid.dimension(), grid.finest_level(), cell);
}

DyadicCube cube_containing_cell(const GridSpec& grid, std::size_t cell, int level) {
  require(level >= 0 && level <= grid.finest_level(), ErrorKind::kInvalidArgument, "level outside grid");
  const int shift = grid.dimension() * (grid.finest_level() - level);
  return DyadicCube::from_code(grid.dimension(), level, static_cast<std::uint64_t>(cell) >> shift);
}

std::vector<double> lower_corner(const GridSpec& grid, const DyadicCube& cube) {
  check_membership(grid, cube);
  const auto c = cube.coords();
  std::vector<double> corner(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    corner[i] = grid.shift()[i] + std::ldexp(static_cast<double>(c[i]), -cube.level());
  }
  return corner;
}

std::vector<DyadicCube> children(const GridSpec& grid, const DyadicCube& cube) {
  check_membership(grid, cube);
  require(cube.level() < grid.finest_level(), ErrorKind::kLevelOverflow,
          "cube at the finest level has no children in this grid");
  std::vector<DyadicCube> out;
  out.reserve(static_cast<std::size_t>(grid.children_per_cube()));
  for (unsigned i = 0; i < static_cast<unsigned>(grid.children_per_cube()); ++i) out.push_back(cube.child(i));
  return out;
}

DyadicCube ancestor(const DyadicCube& cube, int generations) {
  require(generations >= 0, ErrorKind::kInvalidArgument, "ancestor generations must be non-negative");
  require(generations <= cube.level(), ErrorKind::kAboveRoot, "ancestor would lie above the root");
  return DyadicCube::from_code(cube.dimension(), cube.level() - generations,
                               cube.code() >> (cube.dimension() * generations));
}

std::vector<DyadicCube> cubes_at_level(const GridSpec& grid, int level) {
  const std::size_t count = grid.cube_count(level);
  std::vector<DyadicCube> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) out.push_back(DyadicCube::from_code(grid.dimension(), level, c));
  return out;
}

StepFunction::StepFunction(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(values_.size() == grid_.cell_count(), ErrorKind::kInvalidArgument,
          "step function needs " + std::to_string(grid_.cell_count()) + " values, got " +
              std::to_string(values_.size()));
}

StepFunction StepFunction::constant(const GridSpec& grid, double value) {
  return StepFunction(grid, std::vector<double>(grid.cell_count(), value));
}

StepFunction StepFunction::indicator(const GridSpec& grid, const DyadicCube& cube) {
  const auto range = cell_range(grid, cube);
  std::vector<double> v(grid.cell_count(), 0.0);
  std::fill(v.begin() + static_cast<std::ptrdiff_t>(range.begin), v.begin() + static_cast<std::ptrdiff_t>(range.end),
            1.0);
  return StepFunction(grid, std::move(v));
}

void check_same_grid(const GridSpec& a, const GridSpec& b) {
  require(a == b, ErrorKind::kGridMismatch, "functions live on different grids");
}

namespace {

template <class Op>
StepFunction zip(const StepFunction& a, const StepFunction& b, Op op) {
  check_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return StepFunction(a.grid(), std::move(out));
}

template <class Op>
StepFunction map(const StepFunction& f, Op op) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i]);
  return StepFunction(f.grid(), std::move(out));
}

}  // namespace

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}

StepFunction operator-(const StepFunction& a, const StepFunction& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}

StepFunction operator*(double scale, const StepFunction& f) {
  return map(f, [scale](double x) { return scale * x; });
}

StepFunction pointwise_product(const StepFunction& a, const StepFunction& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}

StepFunction absolute(const StepFunction& f) {
  return map(f, [](double x) { return std::abs(x); });
}

StepFunction add_constant(const StepFunction& f, double c) {
  return map(f, [c](double x) { return x + c; });
}

Weight::Weight(StepFunction density) : density_(std::move(density)) {
  for (std::size_t i = 0; i < density_.size(); ++i) {
    const double v = density_[i];
    require(std::isfinite(v) && v > 0.0, ErrorKind::kNonpositiveWeight,
            "weight value at cell " + std::to_string(i) + " is not positive and finite");
  }
}

Weight Weight::constant(const GridSpec& grid, double value) { return Weight(StepFunction::constant(grid, value)); }

Weight scaled(const Weight& w, double factor) { return Weight(factor * w.density()); }

double integral(const StepFunction& f, const DyadicCube& cube) {
  const auto range = cell_range(f.grid(), cube);
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) s += v[i];
  return s * f.grid().cell_volume();
}

double average(const StepFunction& f, const DyadicCube& cube) {
  const auto range = cell_range(f.grid(), cube);
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) s += v[i];
  return s / static_cast<double>(range.size());
}

double measure(const Weight& w, const DyadicCube& cube) { return integral(w.density(), cube); }

double lp_norm(const StepFunction& f, double p) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::kInvalidArgument, "lp_norm needs finite p >= 1");
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double lp_norm(const StepFunction& f, double p, const Weight& mu) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::kInvalidArgument, "lp_norm needs finite p >= 1");
  check_same_grid(f.grid(), mu.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * mu[i];
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double rearrangement_value(const StepFunction& phi, double t) {
  require(t > 0.0, ErrorKind::kInvalidArgument, "rearrangement needs t > 0");
  std::vector<double> mags(phi.size());
  std::transform(phi.values().begin(), phi.values().end(), mags.begin(), [](double x) { return std::abs(x); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  // At most `allowed` cells may exceed the returned level.
  const double cells = t / phi.grid().cell_volume();
  const auto allowed = static_cast<std::size_t>(std::floor(cells + 1e-9));
  if (allowed >= mags.size()) return 0.0;
  return mags[allowed];
}

CubeSums::CubeSums(const StepFunction& f) : CubeSums(f.grid(), f.values()) {}

CubeSums::CubeSums(const GridSpec& grid, std::span<const double> cell_values) : grid_(grid) {
  require(cell_values.size() == grid.cell_count(), ErrorKind::kInvalidArgument, "cell value count mismatch");
  const int n = grid.finest_level();
  const int fan = grid.children_per_cube();
  levels_.resize(static_cast<std::size_t>(n) + 1);
  levels_[static_cast<std::size_t>(n)].assign(cell_values.begin(), cell_values.end());
  for (int k = n - 1; k >= 0; --k) {
    const auto count = static_cast<std::ptrdiff_t>(grid.cube_count(k));
    auto& out = levels_[static_cast<std::size_t>(k)];
    const auto& in = levels_[static_cast<std::size_t>(k) + 1];
    out.assign(static_cast<std::size_t>(count), 0.0);
#pragma omp parallel for schedule(static) if (count > 4096)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      double s = 0.0;
      const auto base = static_cast<std::size_t>(c) * static_cast<std::size_t>(fan);
      for (int i = 0; i < fan; ++i) s += in[base + static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(c)] = s;
    }
  }
}

double CubeSums::average(int level, std::uint64_t code) const noexcept {
  return sum(level, code) / static_cast<double>(std::size_t{1} << (grid_.dimension() * (grid_.finest_level() - level)));
}

}  // namespace czlab
