#pragma once

// Positive dyadic operators T_tau f = sum_Q tau_Q E_Q(f mu) 1_Q, Sawyer
// testing constants, and type-L collections.

#include <utility>
#include <vector>

#include "czlab/dyadics.hpp"
#include "czlab/family.hpp"

namespace czlab {

// Non-negative coefficients on every cube of a grid, stored densely by level.
class TauCoefficients {
 public:
  explicit TauCoefficients(GridSpec grid);

  const GridSpec& grid() const noexcept { return grid_; }
  void set(const DyadicCube& cube, double tau);
  double get(const DyadicCube& cube) const;
  double get(int level, std::uint64_t code) const noexcept {
    return levels_[static_cast<std::size_t>(level)][code];
  }
  std::vector<std::pair<DyadicCube, double>> nonzero() const;

  static TauCoefficients indicator(const CubeFamily& family);

  bool operator==(const TauCoefficients&) const = default;

 private:
  GridSpec grid_;
  std::vector<std::vector<double>> levels_;
};

StepFunction apply_positive(const TauCoefficients& tau, const Weight& mu, const StepFunction& f);

struct TestingReport {
  double value = 0.0;
  DyadicCube witness;
};

// sup_R u(R)^{-1/q} || sum_{Q subset R} tau_Q E_Q(u) 1_Q ||_{L^q(v)}.
TestingReport testing_constant(const TauCoefficients& tau, const Weight& u, const Weight& v, double q);

enum class TestingInput {
  kWeight,      // the weight itself on R, the usual testing condition
  kIndicators,  // sup over R' subset R of w 1_{R'}, normalized by w(R')^{1/p'}; tiny grids only
};

// T_{p'}(w, sigma): testing of the dual operator in L^{p'}(sigma).
TestingReport sawyer_testing(const TauCoefficients& tau, const Weight& w, const Weight& sigma, double p,
                             TestingInput input = TestingInput::kWeight);

struct SawyerReport {
  TestingReport t_pprime;  // T_{p'}(w, sigma)
  TestingReport t_p;       // T_p(sigma, w)
  double proxy = 0.0;      // their sum
};

SawyerReport strong_norm_bound(const TauCoefficients& tau, const Weight& w, const Weight& sigma, double p);

// Smallest Lambda with sup_{Q in L} E_Q exp(Lambda^{-1} sum_{Q' in L, Q' strictly inside Q} 1_{Q'}) <= 2,
// to 1e-6 relative. Returns kLambdaFloor when no member contains another.
inline constexpr double kLambdaFloor = 1e-6;
double lambda_constant(const CubeFamily& family);

StepFunction type_l_apply(const CubeFamily& family, const Weight& mu, const StepFunction& f);

}  // namespace czlab
