#pragma once

#include <limits>

#include "czlab/dyadics.hpp"

namespace czlab {

enum class MaximalMode {
  kDyadic,    // sup over dyadic cubes containing the point (exact)
  kCentered,  // sup over centered windows of whole cells, zero extension
};

struct CharacteristicReport {
  double value = 0.0;
  DyadicCube witness;
  double p = std::numeric_limits<double>::infinity();
};

// p' = p / (p - 1).
double dual_exponent(double p);

// sigma = w^{1-p'}.
Weight dual_weight(const Weight& w, double p);

// sup_Q <w>_Q <sigma>_Q^{p-1} over dyadic cubes, sigma = w^{1-p'}.
CharacteristicReport ap_characteristic(const Weight& w, double p);

// sup_Q w(Q)^{-1} int_Q M(w 1_Q).
CharacteristicReport ainfty_characteristic(const Weight& w, MaximalMode mode = MaximalMode::kDyadic);

// sup_Q <w>_Q^{1/p} <sigma>_Q^{1/p'}.
CharacteristicReport joint_ap(const Weight& w, const Weight& sigma, double p);

StepFunction maximal_function(const StepFunction& f, MaximalMode mode = MaximalMode::kDyadic);

// Single-cube evaluations; used to re-check witnesses.
double ap_value_on(const Weight& w, double p, const DyadicCube& cube);
double ainfty_value_on(const Weight& w, const DyadicCube& cube, MaximalMode mode = MaximalMode::kDyadic);
double joint_ap_value_on(const Weight& w, const Weight& sigma, double p, const DyadicCube& cube);

}  // namespace czlab
