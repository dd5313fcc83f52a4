#include "czlab/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "czlab/characteristics.hpp"
#include "czlab/error.hpp"
#include "czlab/positive.hpp"

namespace czlab {

namespace {

std::vector<DyadicCube> children_above(const CubeSums& sums, const DyadicCube& cube) {
  const GridSpec& grid = sums.grid();
  const double threshold = kStoppingFactor * sums.average(cube);
  std::vector<DyadicCube> out;
  if (cube.level() == grid.finest_level()) return out;
  std::vector<DyadicCube> stack;
  for (unsigned c = static_cast<unsigned>(grid.children_per_cube()); c-- > 0;) stack.push_back(cube.child(c));
  while (!stack.empty()) {
    const DyadicCube q = stack.back();
    stack.pop_back();
    if (sums.average(q) > threshold) {
      out.push_back(q);
      continue;
    }
    if (q.level() == grid.finest_level()) continue;
    for (unsigned c = static_cast<unsigned>(grid.children_per_cube()); c-- > 0;) stack.push_back(q.child(c));
  }
  return out;
}

}  // namespace

std::vector<DyadicCube> stopping_children(const Weight& w, const DyadicCube& cube) {
  check_membership(w.grid(), cube);
  return children_above(CubeSums(w.density()), cube);
}

StoppingFamily::StoppingFamily(const Weight& w, const DyadicCube& q0) : weight_(w) {
  check_membership(w.grid(), q0);
  cubes_.push_back(q0);
  parents_.push_back(-1);
  const CubeSums sums(w.density());
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    children_.emplace_back();
    const auto kids = children_above(sums, cubes_[i]);
    for (const DyadicCube& c : kids) {
      children_[i].push_back(cubes_.size());
      cubes_.push_back(c);
      parents_.push_back(static_cast<long>(i));
    }
    if (packing_margin(i) <= 0.0) {
      fail(ErrorKind::kInvariantViolation, "stopping packing bound fails at member " + std::to_string(i));
    }
  }
}

int StoppingFamily::depth() const {
  std::vector<int> level(cubes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 1; i < cubes_.size(); ++i) {
    level[i] = level[static_cast<std::size_t>(parents_[i])] + 1;
    deepest = std::max(deepest, level[i]);
  }
  return deepest;
}

double StoppingFamily::packing_margin(std::size_t i) const {
  // In cell units, so the comparison with |Q|/4 is exact.
  const GridSpec& grid = weight_.grid();
  std::size_t covered = 0;
  for (std::size_t c : children_[i]) covered += cell_range(grid, cubes_[c]).size();
  const double quarter = kPackingFraction * static_cast<double>(cell_range(grid, cubes_[i]).size());
  return (quarter - static_cast<double>(covered)) * grid.cell_volume();
}

std::size_t StoppingFamily::smallest_containing(const DyadicCube& cube) const {
  require(cubes_.front().contains(cube), ErrorKind::kInvalidArgument, "cube lies outside the stopping root");
  std::size_t at = 0;
  for (;;) {
    bool moved = false;
    for (std::size_t c : children_[at]) {
      if (cubes_[c].contains(cube)) {
        at = c;
        moved = true;
        break;
      }
    }
    if (!moved) return at;
  }
}

double StoppingFamily::carleson_ratio(double ainfty) const {
  double total = 0.0;
  for (const DyadicCube& s : cubes_) total += measure(weight_, s);
  return total / (ainfty * measure(weight_, cubes_.front()));
}

namespace {

// a with 2^{a-1} <= r < 2^a, floored at 0.
int ap_bucket(double r) {
  int e = 0;
  std::frexp(r, &e);  // r = m 2^e, m in [1/2, 1)
  return std::max(e, 0);
}

// b with 2^{1-b} < rho <= 2^{2-b}.
int average_bucket(double rho) {
  int e = 0;
  const double m = std::frexp(rho, &e);
  return m == 0.5 ? 3 - e : 2 - e;
}

}  // namespace

std::map<LabKey, CubeFamily> lab_partition(const CubeFamily& family, const Weight& w, const Weight& sigma, double p,
                                           const StoppingFamily& stopping) {
  check_same_grid(family.grid(), w.grid());
  check_same_grid(family.grid(), sigma.grid());
  require(stopping.weight() == w, ErrorKind::kInconsistentInput, "stopping family was built from another weight");
  std::map<LabKey, std::vector<DyadicCube>> buckets;
  if (family.empty()) return {};
  const double bracket_p = std::pow(joint_ap(w, sigma, p).value, p);
  const CubeSums ws(w.density());
  const CubeSums ss(sigma.density());
  for (const DyadicCube& q : family.cubes()) {
    const std::size_t s = stopping.smallest_containing(q);
    const double ratio = ws.average(q) * std::pow(ss.average(q), p - 1.0);
    const int a = ap_bucket(ratio);
    require(std::ldexp(1.0, a) <= 2.0 * bracket_p * (1.0 + 1e-12), ErrorKind::kInconsistentInput,
            "cube A_p ratio exceeds the global bracket");
    const int b = average_bucket(ws.average(q) / ws.average(stopping.cubes()[s]));
    buckets[{s, a, b}].push_back(q);
  }
  std::map<LabKey, CubeFamily> out;
  for (auto& [key, cubes] : buckets) out.emplace(key, CubeFamily(family.grid(), std::move(cubes)));
  return out;
}

namespace {

StepFunction weighted_counting(const CubeFamily& cls, const Weight& w) {
  // sum_{Q in class} E_Q w 1_Q = T_L(1) with mu = w
  return type_l_apply(cls, w, StepFunction::constant(w.grid(), 1.0));
}

}  // namespace

double distributional_check(const CubeFamily& cls, const Weight& w, const Weight& sigma, const DyadicCube& s, int b,
                            double t, Measure nu, double k, double lambda) {
  const GridSpec& grid = w.grid();
  check_membership(grid, s);
  if (lambda <= 0.0) lambda = cls.empty() ? kLambdaFloor : lambda_constant(cls);
  const StepFunction sum = weighted_counting(cls, w);
  const double threshold = k * lambda * std::ldexp(1.0, -b) * t * average(w.density(), s);
  const auto range = cell_range(grid, s);
  double level = 0.0;
  double whole = 0.0;
  for (std::size_t x = range.begin; x < range.end; ++x) {
    const double dnu = nu == Measure::kSigma ? sigma[x] : 1.0;
    whole += dnu;
    if (sum[x] > threshold) level += dnu;
  }
  return level / (std::exp(-t) * whole);
}

double summation_ratio(const CubeFamily& cls, const Weight& w, const Weight& sigma, double p, int a, int b,
                       double ainfty, const DyadicCube& q0) {
  const double pp = dual_exponent(p);
  const StepFunction sum = weighted_counting(cls, w);
  const GridSpec& grid = w.grid();
  const auto range = cell_range(grid, q0);
  double lhs = 0.0;
  for (std::size_t x = range.begin; x < range.end; ++x) lhs += std::pow(sum[x], pp) * sigma[x];
  lhs *= grid.cell_volume();
  const double rhs = std::pow(2.0, -pp * b) * ainfty * std::pow(2.0, a * (pp - 1.0)) * measure(w, q0);
  return lhs / rhs;
}

}  // namespace czlab
