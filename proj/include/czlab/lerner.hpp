#pragma once

// Medians, local mean oscillation and the median decomposition of a step
// function on a dyadic cube.

#include <vector>

#include "czlab/dyadics.hpp"
#include "czlab/family.hpp"

namespace czlab {

// Lower median: the smallest cell value m on Q with |{phi > m}| <= |Q|/2 and
// |{phi < m}| <= |Q|/2.
double median(const StepFunction& phi, const DyadicCube& cube);

// omega_lambda(phi, Q) = inf_c ((phi - c) 1_Q)^*(lambda |Q|), evaluated exactly.
double oscillation(const StepFunction& phi, const DyadicCube& cube, double lambda);

// sup over dyadic Q' subset Q containing x of omega_lambda(phi, Q'); zero off Q.
StepFunction local_sharp_maximal(const StepFunction& phi, const DyadicCube& cube, double lambda);

struct LernerCube {
  DyadicCube cube;
  double omega_parent = 0.0;  // omega_{2^{-d-2}}(phi, parent of cube)
  bool operator==(const LernerCube&) const = default;
};

struct Decomposition {
  DyadicCube q0;
  double median = 0.0;
  // generations[l] holds generation l + 1, sorted in Z-order.
  std::vector<std::vector<LernerCube>> generations;
  // |phi - m| - (M^#_{1/4} phi + sum omega_parent 1_cube) on Q0, zero elsewhere.
  StepFunction residual;
  // max over Q0 of |phi - m| divided by the bracketed term (0/0 counts as 0).
  double lerner_constant = 0.0;
};

// Runs the selection generation by generation and checks, before returning,
// that each generation is pairwise disjoint, that generations are nested, and
// that |Q ∩ Omega_{l+1}| < |Q|/2 for every Q of generation l. A failed check
// throws invariant-violation.
Decomposition lerner_decompose(const StepFunction& phi, const DyadicCube& q0);

// All cubes of all generations, labelled by generation number.
CubeFamily lerner_family(const GridSpec& grid, const Decomposition& decomposition);

}  // namespace czlab
