#pragma once

#include <vector>

#include "czlab/dyadics.hpp"

namespace czlab {

// A finite set of cubes of one grid, kept sorted by (level, code), with an
// optional generation label per cube.
class CubeFamily {
 public:
  explicit CubeFamily(GridSpec grid) : grid_(std::move(grid)) {}
  CubeFamily(GridSpec grid, std::vector<DyadicCube> cubes, std::vector<int> generations = {});

  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<DyadicCube>& cubes() const noexcept { return cubes_; }
  // Empty when the family is unlabelled; otherwise parallel to cubes().
  const std::vector<int>& generations() const noexcept { return generations_; }
  std::size_t size() const noexcept { return cubes_.size(); }
  bool empty() const noexcept { return cubes_.empty(); }
  bool contains(const DyadicCube& cube) const;

  // Cubes whose generation label is congruent to `residue` mod `period`.
  CubeFamily generation_subfamily(int period, int residue) const;

  bool operator==(const CubeFamily&) const = default;

 private:
  GridSpec grid_;
  std::vector<DyadicCube> cubes_;
  std::vector<int> generations_;
};

}  // namespace czlab
