#pragma once

// Dyadic grid combinatorics on [0,1)^d and piecewise-constant functions on the
// finest cells.
//
// Cubes are addressed by (level, Morton code). The code of a level-k cube
// interleaves the bits of its integer coordinates: bit b of coordinate i sits
// at position b*d + i. Appending d bits selects a child, dropping d bits gives
// the parent, and every cube maps to a contiguous range of finest cells. Step
// function values are stored in that same Z-order.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace czlab {

inline constexpr int kMaxDimension = 3;
inline constexpr int kMaxCellBits = 30;

class GridSpec {
 public:
  GridSpec() : GridSpec(1, 0) {}
  GridSpec(int dimension, int finest_level, std::vector<double> shift = {});

  int dimension() const noexcept { return dimension_; }
  int finest_level() const noexcept { return finest_level_; }
  const std::vector<double>& shift() const noexcept { return shift_; }

  std::size_t cell_count() const noexcept { return std::size_t{1} << (dimension_ * finest_level_); }
  std::size_t cube_count(int level) const;
  std::size_t cells_per_cube(int level) const;
  std::size_t total_cube_count() const;
  int children_per_cube() const noexcept { return 1 << dimension_; }
  double cell_volume() const noexcept;

  bool operator==(const GridSpec&) const = default;

 private:
  int dimension_;
  int finest_level_;
  std::vector<double> shift_;
};

struct CellRange {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const noexcept { return end - begin; }
};

class DyadicCube {
 public:
  DyadicCube() = default;
  static DyadicCube root(int dimension);
  static DyadicCube from_code(int dimension, int level, std::uint64_t code);
  static DyadicCube from_coords(int level, std::span<const std::uint32_t> coords);

  int dimension() const noexcept { return dimension_; }
  int level() const noexcept { return level_; }
  std::uint64_t code() const noexcept { return code_; }
  std::vector<std::uint32_t> coords() const;

  double side_length() const noexcept;
  double volume() const noexcept;

  DyadicCube parent() const;
  DyadicCube child(unsigned index) const;
  bool contains(const DyadicCube& other) const noexcept;

  auto operator<=>(const DyadicCube&) const = default;

 private:
  DyadicCube(int dimension, int level, std::uint64_t code)
      : dimension_(dimension), level_(level), code_(code) {}

  int dimension_ = 1;
  int level_ = 0;
  std::uint64_t code_ = 0;
};

std::uint64_t interleave_bits(std::span<const std::uint32_t> coords, int level);
std::vector<std::uint32_t> deinterleave_bits(std::uint64_t code, int dimension, int level);

// Throws grid-mismatch unless `cube` is a cube of `grid`.
void check_membership(const GridSpec& grid, const DyadicCube& cube);
bool belongs_to(const GridSpec& grid, const DyadicCube& cube) noexcept;

CellRange cell_range(const GridSpec& grid, const DyadicCube& cube);
DyadicCube cell_cube(const GridSpec& grid, std::size_t cell);
DyadicCube cube_containing_cell(const GridSpec& grid, std::size_t cell, int level);
std::vector<double> lower_corner(const GridSpec& grid, const DyadicCube& cube);

std::vector<DyadicCube> children(const GridSpec& grid, const DyadicCube& cube);
DyadicCube ancestor(const DyadicCube& cube, int generations);
std::vector<DyadicCube> cubes_at_level(const GridSpec& grid, int level);

class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(GridSpec grid, std::vector<double> values);
  static StepFunction constant(const GridSpec& grid, double value);
  static StepFunction zero(const GridSpec& grid) { return constant(grid, 0.0); }
  static StepFunction indicator(const GridSpec& grid, const DyadicCube& cube);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t cell) const noexcept { return values_[cell]; }

  bool operator==(const StepFunction&) const = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

StepFunction operator+(const StepFunction& a, const StepFunction& b);
StepFunction operator-(const StepFunction& a, const StepFunction& b);
StepFunction operator*(double scale, const StepFunction& f);
StepFunction pointwise_product(const StepFunction& a, const StepFunction& b);
StepFunction absolute(const StepFunction& f);
StepFunction add_constant(const StepFunction& f, double c);
void check_same_grid(const GridSpec& a, const GridSpec& b);

// A strictly positive, finite step function. Construction validates.
class Weight {
 public:
  explicit Weight(StepFunction density);
  static Weight constant(const GridSpec& grid, double value);

  const StepFunction& density() const noexcept { return density_; }
  const GridSpec& grid() const noexcept { return density_.grid(); }
  std::span<const double> values() const noexcept { return density_.values(); }
  double operator[](std::size_t cell) const noexcept { return density_[cell]; }
  std::size_t size() const noexcept { return density_.size(); }

  bool operator==(const Weight&) const = default;

 private:
  StepFunction density_;
};

Weight scaled(const Weight& w, double factor);

double integral(const StepFunction& f, const DyadicCube& cube);
double average(const StepFunction& f, const DyadicCube& cube);
double measure(const Weight& w, const DyadicCube& cube);

double lp_norm(const StepFunction& f, double p);
double lp_norm(const StepFunction& f, double p, const Weight& mu);

// phi*(t) = inf{s >= 0 : |{|phi| > s}| <= t}, right-continuous convention.
double rearrangement_value(const StepFunction& phi, double t);

// Sums of cell values over every dyadic cube, built bottom-up.
class CubeSums {
 public:
  explicit CubeSums(const StepFunction& f);
  CubeSums(const GridSpec& grid, std::span<const double> cell_values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> level(int k) const noexcept { return levels_[static_cast<std::size_t>(k)]; }
  double sum(int level, std::uint64_t code) const noexcept {
    return levels_[static_cast<std::size_t>(level)][code];
  }
  double sum(const DyadicCube& cube) const noexcept { return sum(cube.level(), cube.code()); }
  double average(int level, std::uint64_t code) const noexcept;
  double average(const DyadicCube& cube) const noexcept { return average(cube.level(), cube.code()); }
  // Integral = sum * cell volume.
  double integral(const DyadicCube& cube) const noexcept { return sum(cube) * grid_.cell_volume(); }

 private:
  GridSpec grid_;
  std::vector<std::vector<double>> levels_;
};

}  // namespace czlab
