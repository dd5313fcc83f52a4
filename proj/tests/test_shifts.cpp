#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "czlab/error.hpp"
#include "czlab/hilbert.hpp"
#include "czlab/serial.hpp"
#include "czlab/shifts.hpp"
#include "support/oracles.hpp"
#include "support/random_inputs.hpp"

using namespace czlab;
using testing_support::max_abs_diff;
using testing_support::random_function;

namespace {

double inner(const StepFunction& a, const StepFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double dense_l2_norm(const HaarShift& s) {
  const Weight one = Weight::constant(s.grid(), 1.0);
  // unweighted operator norm; the matrix acts on cell values with |cell| folded in
  return oracle::weighted_spectral_norm(oracle::shift_matrix(s), one, one);
}

}  // namespace

TEST_CASE("Petermichl shift kills constants and stays local") {
  const GridSpec grid(1, 6);
  const HaarShift s = build_petermichl(grid);
  CHECK(s.m() == 1);
  CHECK(s.n() == 0);
  CHECK(s.cancellative());
  CHECK(max_abs_diff(apply_shift(s, StepFunction::constant(grid, 3.0)), StepFunction::zero(grid)) < 1e-14);
  CHECK(normalization_audit(s) <= 1.0);

  for (const auto& e : s.entries()) {
    const HaarShift one(grid, 1, 0, true, {e});
    Rng rng(e.cube.code() + 1);
    const auto out = apply_shift(one, random_function(grid, rng));
    const auto r = cell_range(grid, e.cube);
    for (std::size_t x = 0; x < out.size(); ++x) {
      if (x < r.begin || x >= r.end) CHECK(out[x] == 0.0);
    }
  }
  CHECK_THROWS_AS(build_petermichl(GridSpec(2, 3)), Error);
}

TEST_CASE("Petermichl L2 norm is stable in N") {
  double prev = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const double norm = dense_l2_norm(build_petermichl(GridSpec(1, n)));
    MESSAGE("N = " << n << ": ||S||_2 = " << norm);
    CHECK(norm <= 1.0 + 1e-9);
    CHECK(norm >= prev - 1e-12);
    prev = norm;
  }
}

TEST_CASE("random shifts are reproducible and normalized") {
  const GridSpec grid(1, 6);
  CHECK(build_random_shift(2, 1, 99, grid, true) == build_random_shift(2, 1, 99, grid, true));
  CHECK_FALSE(build_random_shift(2, 1, 99, grid, true) == build_random_shift(2, 1, 100, grid, true));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int m = static_cast<int>(seed % 3);
    const int n = static_cast<int>((seed / 3) % 3);
    const auto s = build_random_shift(m, n, seed, GridSpec(1 + seed % 2, 4), seed % 4 != 0);
    double worst = 0.0;
    for (const auto& e : s.entries()) {
      for (const auto& p : e.pairs) worst = std::max(worst, p.input.sup_norm() * p.output.sup_norm());
    }
    CHECK(worst <= 1.0 + 1e-12);
    CHECK(worst == doctest::Approx(1.0));
    CHECK(normalization_audit(s) == worst);
  }
  CHECK_THROWS_AS(build_random_shift(4, 1, 1, GridSpec(1, 4), true), Error);
  CHECK_THROWS_AS(build_random_shift(-1, 1, 1, GridSpec(1, 4), true), Error);
}

TEST_CASE("coarse levels of a random shift do not depend on N") {
  const auto coarse = build_random_shift(2, 1, 5, GridSpec(1, 5), true);
  const auto fine = build_random_shift(2, 1, 5, GridSpec(1, 7), true);
  for (const auto& e : coarse.entries()) {
    const auto it = std::find_if(fine.entries().begin(), fine.entries().end(),
                                 [&](const ShiftEntry& x) { return x.cube == e.cube; });
    REQUIRE(it != fine.entries().end());
    CHECK(it->pairs == e.pairs);
  }
}

TEST_CASE("zero coefficients give the zero operator") {
  const GridSpec grid(1, 4);
  auto s = build_random_shift(1, 1, 8, grid, true);
  std::vector<ShiftEntry> entries = s.entries();
  for (auto& e : entries) {
    for (auto& p : e.pairs) {
      std::fill(p.input.child_values.begin(), p.input.child_values.end(), 0.0);
      std::fill(p.output.child_values.begin(), p.output.child_values.end(), 0.0);
    }
  }
  const HaarShift zero(grid, 1, 1, true, entries);
  Rng rng(1);
  CHECK(apply_shift(zero, random_function(grid, rng)) == StepFunction::zero(grid));
  CHECK(normalization_audit(zero) == 0.0);
}

TEST_CASE("construction enforces the joint normalization") {
  const GridSpec grid(1, 3);
  const auto q = DyadicCube::root(1);
  ShiftPair p{{q, {2.0, -2.0}, true}, {q, {1.0, -1.0}, true}};
  CHECK_THROWS_AS(HaarShift(grid, 0, 0, true, {{q, {p}}}), Error);
  p.input.child_values = {0.5, -0.5};
  p.output.child_values = {2.0, -2.0};
  CHECK_NOTHROW(HaarShift(grid, 0, 0, true, {{q, {p}}}));
  p.output.child_values = {1.0, 0.5};
  CHECK_THROWS_AS(HaarShift(grid, 0, 0, true, {{q, {p}}}), Error);
}

TEST_CASE("apply_shift matches the dense kernel form") {
  Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + t % 2;
    const int n_levels = d == 1 ? 4 : 3;
    const int m = static_cast<int>(rng.below(3));
    const int n = static_cast<int>(rng.below(3));
    if (std::max(m, n) > n_levels - 1) continue;
    const GridSpec grid(d, n_levels);
    const auto s = build_random_shift(m, n, rng.next(), grid, t % 3 != 0);
    const auto f = random_function(grid, rng);
    const auto dense = oracle::from_vector(grid, oracle::shift_matrix(s) * oracle::to_vector(f));
    CHECK(max_abs_diff(apply_shift(s, f), dense) < 1e-10);
    CHECK(max_abs_diff(serial::apply_shift(s, f), dense) < 1e-10);
  }
}

TEST_CASE("maximal truncation matches brute force over cutoffs") {
  Rng rng(73);
  for (int t = 0; t < 50; ++t) {
    const GridSpec grid(1 + t % 2, t % 2 ? 3 : 4);
    const int m = static_cast<int>(rng.below(2));
    const int n = static_cast<int>(rng.below(2));
    const auto s = build_random_shift(m, n, rng.next(), grid, t % 2 == 0);
    const auto f = random_function(grid, rng);
    const auto brute = oracle::truncation_oracle(s, f);
    const auto fast = maximal_truncation(s, f);
    CHECK(max_abs_diff(fast, brute) < 1e-10);
    CHECK(max_abs_diff(serial::maximal_truncation(s, f), brute) < 1e-10);
    const auto full = apply_shift(s, f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(fast[i] >= std::abs(full[i]) - 1e-13);
  }
  const GridSpec grid(1, 5);
  const auto c = StepFunction::constant(grid, 2.0);
  CHECK(max_abs_diff(maximal_truncation(build_petermichl(grid), c), StepFunction::zero(grid)) < 1e-14);
}

TEST_CASE("linearity and transpose") {
  Rng rng(79);
  for (int t = 0; t < 20; ++t) {
    const GridSpec grid(1 + t % 2, 4);
    const auto s = build_random_shift(1 + t % 2, t % 3, rng.next(), grid, t % 2 == 0);
    const auto f = random_function(grid, rng);
    const auto g = random_function(grid, rng);
    const double a = rng.uniform(-3.0, 3.0);
    CHECK(max_abs_diff(apply_shift(s, a * f + g), a * apply_shift(s, f) + apply_shift(s, g)) < 1e-12);
    const auto st = transpose(s);
    CHECK(st.m() == s.n());
    CHECK(st.n() == s.m());
    CHECK(inner(apply_shift(s, f), g) == doctest::Approx(inner(f, apply_shift(st, g))).epsilon(1e-12));
    CHECK(transpose(st) == s);
  }
}

TEST_CASE("shift output is constant on a cube when f vanishes near it") {
  Rng rng(83);
  for (int t = 0; t < 30; ++t) {
    const GridSpec grid(1 + t % 2, 5 - t % 2);
    const int m = static_cast<int>(rng.below(3));
    const int n = static_cast<int>(rng.below(3));
    const int kappa = std::max(m, n);
    const auto s = build_random_shift(m, n, rng.next(), grid, t % 2 == 0);
    const int level = kappa + static_cast<int>(rng.below(grid.finest_level() - kappa + 1));
    const auto q = DyadicCube::from_code(grid.dimension(), level, rng.below(grid.cube_count(level)));
    const auto far = cell_range(grid, ancestor(q, kappa));
    auto f = random_function(grid, rng);
    auto v = f.mutable_values();
    for (std::size_t x = far.begin; x < far.end; ++x) v[x] = 0.0;
    const auto r = cell_range(grid, q);
    for (const auto& out : {apply_shift(s, f), maximal_truncation(s, f)}) {
      const auto [lo, hi] = std::minmax_element(out.values().begin() + r.begin, out.values().begin() + r.end);
      CHECK(*hi - *lo <= 1e-13 * std::max(1.0, std::abs(*hi)));
    }
  }
}

TEST_CASE("cancellative shifts are L2 bounded uniformly in complexity") {
  const GridSpec grid(1, 6);
  double worst = 0.0;
  for (int kappa = 1; kappa <= 4; ++kappa) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const double a = dense_l2_norm(build_random_shift(kappa, kappa, seed, grid, true));
      const double b = dense_l2_norm(build_random_shift(kappa, 0, seed, grid, true));
      worst = std::max({worst, a, b});
    }
  }
  MESSAGE("max L2 norm over complexity 1..4: " << worst);
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("paraproducts") {
  const GridSpec grid(1, 4);
  CHECK(apply_shift(build_paraproduct({}, grid), StepFunction::constant(grid, 1.0)) == StepFunction::zero(grid));

  std::uint32_t c[] = {1};
  const auto q0 = DyadicCube::from_coords(2, c);
  const auto s = build_paraproduct({{q0, std::sqrt(q0.volume())}}, grid);
  Rng rng(89);
  const auto f = random_function(grid, rng);
  const auto out = apply_shift(s, f);
  const double mean = average(f, q0);
  const auto r = cell_range(grid, q0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    double expected = 0.0;
    if (x >= r.begin && x < r.end) expected = x < r.begin + r.size() / 2 ? mean : -mean;
    CHECK(out[x] == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_paraproduct({{q0, 1.01 * std::sqrt(q0.volume())}}, grid), Error);
}

TEST_CASE("paraproduct with Carleson coefficients has bounded L2 norm") {
  // a_Q = +-sqrt|Q| on the chain [0, 2^-k) plus half-size coefficients on the
  // other children of that chain.
  double worst = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const GridSpec grid(1, n);
    Rng rng(97);
    std::map<DyadicCube, double> a;
    for (int k = 0; k < n; ++k) {
      const auto q = DyadicCube::from_code(1, k, 0);
      a[q] = rng.sign() * std::sqrt(q.volume());
      if (k > 0) {
        const auto sib = DyadicCube::from_code(1, k, 1);
        a[sib] = 0.5 * rng.sign() * std::sqrt(sib.volume());
      }
    }
    const double norm = dense_l2_norm(build_paraproduct(a, grid));
    MESSAGE("N = " << n << ": ||Pi||_2 = " << norm);
    worst = std::max(worst, norm);
  }
  CHECK(worst < 3.0);
}

TEST_CASE("discrete Hilbert transform") {
  const GridSpec grid(1, 6);
  Rng rng(101);
  const auto f = random_function(grid, rng);
  const auto g = random_function(grid, rng);
  CHECK(inner(hilbert_direct(f), g) == doctest::Approx(-inner(f, hilbert_direct(g))).epsilon(1e-10));

  std::vector<double> even(grid.cell_count());
  for (std::size_t i = 0; i < even.size(); ++i) even[i] = std::cos(static_cast<double>(std::min(i, even.size() - 1 - i)));
  const auto h = hilbert_direct(StepFunction(grid, even));
  for (std::size_t i = 0; i < even.size(); ++i) CHECK(h[i] == doctest::Approx(-h[even.size() - 1 - i]).epsilon(1e-12));

  // Against the continuum value log(x / (1 - x)) for f = 1 on [0, 1).
  const GridSpec fine(1, 10);
  const auto hc = hilbert_direct(StepFunction::constant(fine, 1.0));
  for (std::size_t i = fine.cell_count() / 4; i < 3 * fine.cell_count() / 4; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * fine.cell_volume();
    CHECK(std::abs(hc[i] - std::log(x / (1.0 - x))) < 1e-3);
  }
  CHECK_THROWS_AS(hilbert_direct(StepFunction::zero(GridSpec(2, 2))), Error);
}

TEST_CASE("a one-grid ensemble is the Petermichl pairing") {
  const GridSpec grid(1, 6);
  const GridEnsemble one({GridSample{GridSpec(1, 6, {0.0}), 1.0, 1.0}}, 0);
  const auto f = StepFunction::indicator(grid, DyadicCube::from_code(1, 2, 0));
  const auto g = StepFunction::indicator(grid, DyadicCube::from_code(1, 2, 3));
  const auto r = hilbert_average(one, f, g);
  CHECK(r.average == doctest::Approx(inner(apply_shift(build_petermichl(grid), f), g)).epsilon(1e-12));
  CHECK(r.direct == doctest::Approx(inner(hilbert_direct(f), g)).epsilon(1e-12));
  CHECK(r.standard_error == 0.0);
}

TEST_CASE("Hilbert averaging refuses overlapping supports") {
  const GridSpec grid(1, 5);
  const auto ens = GridEnsemble::random(grid, 4, 3);
  const auto f = StepFunction::indicator(grid, DyadicCube::from_code(1, 2, 1));
  CHECK_THROWS_AS(hilbert_average(ens, f, f), Error);
  // adjacent cells count as touching
  const auto g = StepFunction::indicator(grid, DyadicCube::from_code(1, 2, 2));
  CHECK_THROWS_AS(hilbert_average(ens, f, g), Error);
}

TEST_CASE("ensemble coefficients are normalized") {
  const GridEnsemble e({GridSample{GridSpec(1, 3, {0.1}), 1.0, 3.0}, GridSample{GridSpec(1, 3, {0.7}), 1.5, -1.0}},
                       2);
  double total = 0.0;
  for (const auto& s : e.samples()) total += std::abs(s.coefficient);
  CHECK(total == doctest::Approx(1.0));
  CHECK_THROWS_AS(GridEnsemble({GridSample{GridSpec(1, 3, {0.1}), 2.0, 1.0}}, 2), Error);
}

TEST_CASE("averaged pairings are proportional to the Hilbert pairing") {
  const GridSpec grid(1, 8);
  const auto ens = GridEnsemble::random(grid, 2000, 12345);
  const auto ind = [&](int level, std::uint64_t code) {
    return StepFunction::indicator(grid, DyadicCube::from_code(1, level, code));
  };
  const std::vector<std::pair<StepFunction, StepFunction>> cases = {
      {ind(2, 0), ind(2, 3)}, {ind(3, 1), ind(3, 6)}, {ind(2, 1), ind(3, 7)}, {ind(4, 2), ind(2, 2)}};
  std::vector<HilbertPairing> pairs;
  for (const auto& [f, g] : cases) pairs.push_back(hilbert_average(ens, f, g));
  const auto fit = fit_proportionality(pairs);
  MESSAGE("fitted constant " << fit.constant << ", max relative residual " << fit.max_residual);
  CHECK(std::abs(fit.constant) > 0.05);
  CHECK(fit.max_residual < 0.1);
}
