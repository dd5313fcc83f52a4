#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "czlab/dyadics.hpp"
#include "czlab/error.hpp"
#include "support/random_inputs.hpp"

using namespace czlab;

namespace {

std::vector<double> endpoints(const GridSpec& grid, const DyadicCube& q) {
  const auto lo = lower_corner(grid, q);
  return {lo[0], lo[0] + q.side_length()};
}

}  // namespace

TEST_CASE("children of the unit interval are its halves") {
  const GridSpec grid(1, 3);
  const auto kids = children(grid, DyadicCube::root(1));
  REQUIRE(kids.size() == 2);
  CHECK(endpoints(grid, kids[0]) == std::vector<double>{0.0, 0.5});
  CHECK(endpoints(grid, kids[1]) == std::vector<double>{0.5, 1.0});
}

TEST_CASE("children of [1/4, 1/2) at N = 3") {
  const GridSpec grid(1, 3);
  const std::uint32_t c[] = {1};
  const auto q = DyadicCube::from_coords(2, c);
  CHECK(endpoints(grid, q) == std::vector<double>{0.25, 0.5});
  const auto kids = children(grid, q);
  CHECK(endpoints(grid, kids[0]) == std::vector<double>{0.25, 0.375});
  CHECK(endpoints(grid, kids[1]) == std::vector<double>{0.375, 0.5});
}

TEST_CASE("quadrants of the unit square keep the volume") {
  const GridSpec grid(2, 2);
  const auto kids = children(grid, DyadicCube::root(2));
  REQUIRE(kids.size() == 4);
  double vol = 0.0;
  for (const auto& k : kids) vol += k.volume();
  CHECK(vol == 1.0);
}

TEST_CASE("finest cubes have no children") {
  const GridSpec grid(1, 2);
  try {
    children(grid, cell_cube(grid, 1));
    FAIL("expected level overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kLevelOverflow);
  }
}

TEST_CASE("ancestors") {
  const GridSpec grid(1, 3);
  const std::uint32_t c[] = {3};
  const auto q = DyadicCube::from_coords(3, c);  // [3/8, 1/2)
  CHECK(ancestor(q, 0) == q);
  CHECK(endpoints(grid, ancestor(q, 2)) == std::vector<double>{0.0, 0.5});
  CHECK(ancestor(q, 3) == DyadicCube::root(1));
  CHECK_THROWS_AS(ancestor(q, 4), Error);
}

TEST_CASE("level tiling and nesting trichotomy") {
  for (int d = 1; d <= 3; ++d) {
    const GridSpec grid(d, d == 3 ? 2 : 3);
    for (int k = 0; k <= grid.finest_level(); ++k) {
      std::vector<int> covered(grid.cell_count(), 0);
      for (const auto& q : cubes_at_level(grid, k)) {
        const auto r = cell_range(grid, q);
        for (std::size_t x = r.begin; x < r.end; ++x) ++covered[x];
        for (std::size_t x = r.begin; x < r.end; ++x) CHECK(q.contains(cell_cube(grid, x)));
      }
      CHECK(std::all_of(covered.begin(), covered.end(), [](int c) { return c == 1; }));
    }
    Rng rng(11 + d);
    for (int t = 0; t < 200; ++t) {
      const int ka = static_cast<int>(rng.below(grid.finest_level() + 1));
      const int kb = static_cast<int>(rng.below(grid.finest_level() + 1));
      const auto a = DyadicCube::from_code(d, ka, rng.below(grid.cube_count(ka)));
      const auto b = DyadicCube::from_code(d, kb, rng.below(grid.cube_count(kb)));
      const auto ra = cell_range(grid, a);
      const auto rb = cell_range(grid, b);
      const std::size_t lo = std::max(ra.begin, rb.begin);
      const std::size_t hi = std::min(ra.end, rb.end);
      if (lo >= hi) {
        CHECK_FALSE(a.contains(b));
        CHECK_FALSE(b.contains(a));
      } else {
        CHECK((a.contains(b) || b.contains(a)));
        CHECK(hi - lo == std::min(ra.size(), rb.size()));
      }
    }
  }
}

TEST_CASE("Morton codes round trip through coordinates") {
  const GridSpec grid(3, 3);
  for (std::uint64_t code = 0; code < grid.cube_count(3); ++code) {
    const auto q = DyadicCube::from_code(3, 3, code);
    const auto c = q.coords();
    CHECK(DyadicCube::from_coords(3, c) == q);
    CHECK(q.child(5).parent() == q);
  }
}

TEST_CASE("averages") {
  const GridSpec grid(1, 1);
  const StepFunction f(grid, {4.0, 1.0});
  CHECK(average(f, DyadicCube::root(1)) == doctest::Approx(2.5));
  CHECK(average(StepFunction::constant(GridSpec(2, 3), 7.0), DyadicCube::from_code(2, 1, 2)) ==
        doctest::Approx(7.0));
}

TEST_CASE("averages telescope and are linear") {
  Rng rng(3);
  const GridSpec grid(2, 4);
  const StepFunction f = testing_support::random_function(grid, rng);
  const StepFunction g = testing_support::random_function(grid, rng);
  for (int k = 0; k < grid.finest_level(); ++k) {
    for (const auto& q : cubes_at_level(grid, k)) {
      double s = 0.0;
      for (const auto& c : children(grid, q)) s += c.volume() / q.volume() * average(f, c);
      CHECK(std::abs(s - average(f, q)) < 1e-12);
      CHECK(std::abs(average(f + g, q) - average(f, q) - average(g, q)) < 1e-12);
    }
  }
}

TEST_CASE("L^p norms") {
  CHECK(lp_norm(StepFunction::constant(GridSpec(2, 3), 1.0), 3.0) == doctest::Approx(1.0));
  const GridSpec grid(1, 1);
  CHECK(lp_norm(StepFunction(grid, {1.0, 3.0}), 2.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  Rng rng(5);
  const GridSpec g3(1, 5);
  const auto f = testing_support::random_function(g3, rng);
  const auto w = testing_support::random_weight(g3, rng);
  CHECK(lp_norm(-3.0 * f, 1.5, w) == doctest::Approx(3.0 * lp_norm(f, 1.5, w)).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(f, 0.5), Error);
}

TEST_CASE("decreasing rearrangement") {
  const GridSpec grid(1, 2);
  const StepFunction phi(grid, {1.0, 1.0, 0.0, 0.0});
  CHECK(rearrangement_value(phi, 0.25) == 1.0);
  CHECK(rearrangement_value(phi, 0.5) == 0.0);
  CHECK(rearrangement_value(StepFunction::zero(grid), 0.75) == 0.0);
  CHECK_THROWS_AS(rearrangement_value(phi, 0.0), Error);

  // Non-increasing and equimeasurable.
  Rng rng(9);
  const GridSpec g(1, 6);
  const auto f = testing_support::random_function(g, rng, -2.0, 2.0);
  double prev = INFINITY;
  for (std::size_t i = 1; i <= g.cell_count(); ++i) {
    const double t = static_cast<double>(i) * g.cell_volume();
    const double v = rearrangement_value(f, t);
    CHECK(v <= prev);
    prev = v;
    std::size_t above = 0;
    for (double x : f.values()) above += std::abs(x) > v ? 1 : 0;
    CHECK(static_cast<double>(above) * g.cell_volume() <= t + 1e-15);
  }
}

TEST_CASE("weights reject non-positive values") {
  const GridSpec grid(1, 1);
  CHECK_THROWS_AS(Weight(StepFunction(grid, {1.0, 0.0})), Error);
  CHECK_THROWS_AS(Weight(StepFunction(grid, {1.0, -2.0})), Error);
  CHECK_NOTHROW(Weight(StepFunction(grid, {1.0, 2.0})));
}

TEST_CASE("cube sums agree with direct integrals") {
  Rng rng(21);
  const GridSpec grid(2, 4);
  const auto f = testing_support::random_function(grid, rng);
  const CubeSums sums(f);
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (const auto& q : cubes_at_level(grid, k)) CHECK(std::abs(sums.integral(q) - integral(f, q)) < 1e-13);
  }
}

TEST_CASE("grid membership is checked") {
  const GridSpec grid(1, 2);
  CHECK_THROWS_AS(average(StepFunction::zero(grid), DyadicCube::from_code(1, 3, 0)), Error);
  CHECK_THROWS_AS(average(StepFunction::zero(grid), DyadicCube::root(2)), Error);
  CHECK_THROWS_AS(GridSpec(1, 2, {1.0}), Error);
}
