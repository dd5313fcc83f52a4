#pragma once

// Parameterized weight families for sweeps and randomized tests.

#include <cstdint>
#include <string>

#include "czlab/dyadics.hpp"

namespace czlab {

// Cell averages of |x - x0|^alpha on [0,1) (d = 1), alpha > -1, with x0
// snapped to the nearest cell boundary.
Weight power_weight(const GridSpec& grid, double alpha, double x0 = 1.0 / 3.0);

// `ratio` on the first half of the first axis, 1 elsewhere.
Weight two_value_weight(const GridSpec& grid, double ratio);

// Mean-preserving multiplicative cascade: every cube splits its value among
// its children by factors 1 +- delta, half of each sign, signs drawn from a
// stream keyed by (seed, level, code). The grid at level N averaged down to
// level N' < N is exactly the cascade drawn at N'.
Weight cascade_weight(const GridSpec& grid, double delta, std::uint64_t seed);

// Dispatch on a family name: "power", "two-value", "cascade", "constant".
Weight family_weight(const std::string& family, const GridSpec& grid, double param, std::uint64_t seed);

}  // namespace czlab
