#pragma once

// Stopping cubes of a weight and the (S, a, b) partition of a cube family.

#include <compare>
#include <map>
#include <vector>

#include "czlab/dyadics.hpp"
#include "czlab/family.hpp"

namespace czlab {

inline constexpr double kStoppingFactor = 4.0;
inline constexpr double kPackingFraction = 0.25;

// Maximal Q' strictly inside Q with E_{Q'} w > 4 E_Q w, in Z-order.
std::vector<DyadicCube> stopping_children(const Weight& w, const DyadicCube& cube);

class StoppingFamily {
 public:
  // Iterates stopping children from q0 and checks the packing bound
  // sum_{Q' child of Q} |Q'| < |Q|/4 for every member (invariant-violation
  // otherwise). Members are stored in breadth-first order; index 0 is q0.
  StoppingFamily(const Weight& w, const DyadicCube& q0);

  const DyadicCube& root() const noexcept { return cubes_.front(); }
  const std::vector<DyadicCube>& cubes() const noexcept { return cubes_; }
  // -1 for the root.
  const std::vector<long>& parents() const noexcept { return parents_; }
  const std::vector<std::vector<std::size_t>>& children() const noexcept { return children_; }
  const Weight& weight() const noexcept { return weight_; }
  std::size_t size() const noexcept { return cubes_.size(); }
  // Number of generations below the root.
  int depth() const;

  // |Q|/4 - sum of |Q'| over the stopping children of member i; always > 0.
  double packing_margin(std::size_t i) const;

  // Index of the smallest member containing `cube`, by descent from the root.
  std::size_t smallest_containing(const DyadicCube& cube) const;

  // sum_S w(S) / (ainfty * w(q0)).
  double carleson_ratio(double ainfty) const;

 private:
  Weight weight_;
  std::vector<DyadicCube> cubes_;
  std::vector<long> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

inline StoppingFamily build_stopping_family(const Weight& w, const DyadicCube& q0) { return StoppingFamily(w, q0); }

struct LabKey {
  std::size_t stopping_index = 0;
  int a = 0;
  int b = 0;
  auto operator<=>(const LabKey&) const = default;
};

// Each Q goes to (S, a, b): S the smallest stopping cube containing Q,
// 2^{a-1} <= <w>_Q <sigma>_Q^{p-1} < 2^a (ratios below 1/2 land in a = 0),
// and 2^{1-b} E_S w < E_Q w <= 2^{2-b} E_S w. Throws inconsistent-input if
// `stopping` was built from a weight other than w, or if 2^a > 2 [w, sigma]_{A_p}^p.
std::map<LabKey, CubeFamily> lab_partition(const CubeFamily& family, const Weight& w, const Weight& sigma, double p,
                                           const StoppingFamily& stopping);

enum class Measure { kLebesgue, kSigma };

// nu({x in S : sum_{Q in class} E_Q w 1_Q > K Lambda 2^{-b} t E_S w}) / (e^{-t} nu(S)),
// with Lambda = lambda_constant(class) unless given (> 0).
double distributional_check(const CubeFamily& cls, const Weight& w, const Weight& sigma, const DyadicCube& s, int b,
                            double t, Measure nu, double k = 1.0, double lambda = 0.0);

// int (sum_{Q in class} 1_Q E_Q w)^{p'} dsigma / (2^{-p' b} ainfty 2^{a(p'-1)} w(q0)).
double summation_ratio(const CubeFamily& cls, const Weight& w, const Weight& sigma, double p, int a, int b,
                       double ainfty, const DyadicCube& q0);

}  // namespace czlab
