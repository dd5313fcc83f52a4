#pragma once

// Weighted operator-norm estimation and the sharpness sweep.
//
// Every estimate concerns f -> T(sigma f) from L^p(sigma) to L^p(w).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "czlab/dyadics.hpp"
#include "czlab/positive.hpp"
#include "czlab/shifts.hpp"

namespace czlab {

struct OperatorHandle {
  std::string name;
  std::function<StepFunction(const StepFunction&)> apply;
  // Unweighted L^2 transpose; empty when unavailable.
  std::function<StepFunction(const StepFunction&)> apply_transpose;
  bool linear = true;
};

OperatorHandle shift_operator(const HaarShift& shift);
OperatorHandle truncation_operator(const HaarShift& shift);
// T_tau with Lebesgue averages; self-transpose.
OperatorHandle positive_operator(const TauCoefficients& tau);
OperatorHandle identity_operator();

enum class NormMethod { kSpectral, kSearch };

struct NormEstimate {
  double lower_bound = 0.0;
  NormMethod method = NormMethod::kSearch;
  StepFunction witness;
  double p = 2.0;
  int iterations = 0;
  // Spectral only: false when the iteration cap was hit. The norm lies in
  // [lower_bound, upper_bound]; after the cap the upper end is the
  // Hilbert-Schmidt norm.
  bool converged = true;
  double upper_bound = 0.0;
};

// ||f -> T(sigma f)||_{L^p(sigma) -> L^p(w)} evaluated on one function.
double weighted_ratio(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p, const StepFunction& f);

// Power iteration on f -> T^t(w T(sigma f)), self-adjoint in L^2(sigma).
// Stops when the residual falls below tolerance times the Rayleigh quotient.
NormEstimate norm_p2(const OperatorHandle& op, const Weight& w, const Weight& sigma, double tolerance = 1e-8,
                     int max_iterations = 10000);

struct SearchOptions {
  int ascent_steps = 50;
  int boyd_steps = 30;
  double initial_step = 0.5;
  // Number of best cube indicators refined by ascent.
  int refine_indicators = 4;
  bool spectral_start = true;
};

// Best ratio over: all cube indicators, the p = 2 spectral witness (when the
// operator is linear with a transpose), `budget` seeded random starts and any
// extra starts. Starts are refined by p-norm power steps when a transpose
// exists, then by multiplicative perturbation with step halving. Restart i
// draws from its own stream, so a larger budget never lowers the result.
NormEstimate norm_lp_lower(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p, int budget,
                           std::uint64_t seed, std::span<const StepFunction> extra_starts = {},
                           const SearchOptions& options = {});

// max over witnesses f and levels v of v w(|T(sigma f)| >= v)^{1/p} / ||f||_{L^p(sigma)}.
double weak_norm_estimate(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p,
                          std::span<const StepFunction> witnesses);
// Witnesses: every cube indicator.
double weak_norm_estimate(const OperatorHandle& op, const Weight& w, const Weight& sigma, double p);

std::vector<StepFunction> cube_indicators(const GridSpec& grid);

struct SweepRow {
  std::string family;
  double param = 0.0;
  double p = 2.0;
  int N = 0;
  double joint_ap = 0.0;
  double ainfty_w = 0.0;
  double ainfty_sigma = 0.0;
  double norm = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double buckley_rhs = 0.0;
  bool operator==(const SweepRow&) const = default;
};

struct OperatorSpec {
  std::string kind = "petermichl";  // petermichl | random-shift | paraproduct | hilbert | maximal
  int m = 2;
  int n = 2;
  std::uint64_t seed = 1;
  bool cancellative = true;
  bool truncated = true;  // shifts: measure S_natural rather than S
};

struct WeightSpec {
  std::string family;
  double param = 0.0;
  std::uint64_t seed = 0;
};

struct SweepSpec {
  OperatorSpec op;
  std::vector<WeightSpec> weights;
  std::vector<double> ps{1.5, 2.0, 3.0};
  std::vector<int> levels{8, 10};
  int budget = 4;
  std::uint64_t seed = 0;
};

// The operator on a grid of finest level N, as the sweep builds it. The
// paraproduct kind uses seeded Carleson coefficients on the chain [0, 2^-k).
OperatorHandle build_operator(const OperatorSpec& spec, const GridSpec& grid);

// One-weight rows with sigma = w^{1-p'}: rhs = joint_ap max{ainfty_w^{1/p'},
// ainfty_sigma^{1/p}}, buckley_rhs = ||w||_{A_p}^{max(1, 1/(p-1))}. Rows come
// out in (weight, p, N) order.
std::vector<SweepRow> sharpness_sweep(const SweepSpec& spec);

// Petermichl + two complexity-2 random shifts over power and two-value weights.
std::vector<SweepSpec> default_sweep(std::uint64_t seed);

}  // namespace czlab
