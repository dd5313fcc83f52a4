#pragma once

// Single-threaded reference kernels. They follow the defining sums directly
// (no cube-sum pyramid, no OpenMP) and are kept for cross-checking and for
// benchmarking the parallel kernels.

#include "czlab/characteristics.hpp"
#include "czlab/positive.hpp"
#include "czlab/shifts.hpp"

namespace czlab::serial {

StepFunction apply_shift(const HaarShift& shift, const StepFunction& f);
StepFunction maximal_truncation(const HaarShift& shift, const StepFunction& f);
StepFunction apply_positive(const TauCoefficients& tau, const Weight& mu, const StepFunction& f);
StepFunction maximal_function(const StepFunction& f);
double ap_characteristic(const Weight& w, double p);
double ainfty_characteristic(const Weight& w);
TestingReport testing_constant(const TauCoefficients& tau, const Weight& u, const Weight& v, double q);

}  // namespace czlab::serial
