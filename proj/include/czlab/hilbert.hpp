#pragma once

// The Hilbert transform as an average of Petermichl shifts over random dyadic
// lattices, checked against a direct principal-value quadrature.

#include <cstdint>
#include <span>
#include <vector>

#include "czlab/dyadics.hpp"

namespace czlab {

// Hf(x_i) = sum_{j != i} f_j h / (x_i - x_j) at cell midpoints (d = 1). The
// matrix is exactly skew-symmetric.
StepFunction hilbert_direct(const StepFunction& f);

// One lattice of the average. Its intervals at level k have side r 2^{-k}
// and are translated by beta = shift * r * 2^K, K the ensemble's coarse_levels;
// `grid.shift()[0]` holds the fraction `shift`.
struct GridSample {
  GridSpec grid;
  double dilation = 1.0;  // r in [1, 2)
  double coefficient = 1.0;
};

class GridEnsemble {
 public:
  // Coefficients are rescaled so that their absolute values sum to 1.
  GridEnsemble(std::vector<GridSample> samples, int coarse_levels);

  // `count` lattices with uniform translation and log-uniform dilation.
  static GridEnsemble random(const GridSpec& grid, std::size_t count, std::uint64_t seed, int coarse_levels = 10);

  const std::vector<GridSample>& samples() const noexcept { return samples_; }
  int coarse_levels() const noexcept { return coarse_levels_; }
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  std::vector<GridSample> samples_;
  int coarse_levels_ = 0;
};

struct HilbertPairing {
  double average = 0.0;         // sum_omega c_omega <S^omega f, g>
  double standard_error = 0.0;  // Monte-Carlo error of `average`
  double direct = 0.0;          // <Hf, g> from hilbert_direct
};

// Requires separated supports: no cell where g != 0 may be equal or adjacent
// to a cell where f != 0. Only lattice levels -K..N-2 are used, so a one-grid
// ensemble with zero shift, unit dilation and K = 0 reproduces
// <apply_shift(build_petermichl(grid), f), g>.
HilbertPairing hilbert_average(const GridEnsemble& ensemble, const StepFunction& f, const StepFunction& g);

// Least-squares c with average ~ c * direct, and each pair's relative residual
// |average - c direct| / |c direct|.
struct ProportionalityFit {
  double constant = 0.0;
  std::vector<double> relative_residuals;
  double max_residual = 0.0;
};
ProportionalityFit fit_proportionality(std::span<const HilbertPairing> pairs);

}  // namespace czlab
