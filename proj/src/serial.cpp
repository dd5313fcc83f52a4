#include "czlab/serial.hpp"

#include <algorithm>
#include <cmath>

namespace czlab::serial {

namespace {

double cube_integral(const StepFunction& f, const DyadicCube& q) {
  const auto r = cell_range(f.grid(), q);
  double s = 0.0;
  for (std::size_t x = r.begin; x < r.end; ++x) s += f[x];
  return s * f.grid().cell_volume();
}

double pairing(const StepFunction& f, const HaarFunction& h) {
  double s = 0.0;
  for (std::size_t c = 0; c < h.child_values.size(); ++c) {
    s += h.child_values[c] * cube_integral(f, h.cube.child(static_cast<unsigned>(c)));
  }
  return s;
}

void add_haar(std::vector<double>& out, const GridSpec& grid, const HaarFunction& h, double coeff) {
  for (std::size_t c = 0; c < h.child_values.size(); ++c) {
    const auto r = cell_range(grid, h.cube.child(static_cast<unsigned>(c)));
    for (std::size_t x = r.begin; x < r.end; ++x) out[x] += coeff * h.child_values[c];
  }
}

}  // namespace

StepFunction apply_shift(const HaarShift& shift, const StepFunction& f) {
  check_same_grid(shift.grid(), f.grid());
  std::vector<double> out(f.size(), 0.0);
  for (const ShiftEntry& e : shift.entries()) {
    for (const ShiftPair& p : e.pairs) add_haar(out, f.grid(), p.output, pairing(f, p.input) / e.cube.volume());
  }
  return StepFunction(f.grid(), std::move(out));
}

StepFunction maximal_truncation(const HaarShift& shift, const StepFunction& f) {
  check_same_grid(shift.grid(), f.grid());
  const GridSpec& grid = f.grid();
  std::vector<double> partial(f.size(), 0.0);
  std::vector<double> best(f.size(), 0.0);
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (const ShiftEntry& e : shift.entries()) {
      if (e.cube.level() != k) continue;
      for (const ShiftPair& p : e.pairs) add_haar(partial, grid, p.output, pairing(f, p.input) / e.cube.volume());
    }
    for (std::size_t x = 0; x < f.size(); ++x) best[x] = std::max(best[x], std::abs(partial[x]));
  }
  return StepFunction(grid, std::move(best));
}

StepFunction apply_positive(const TauCoefficients& tau, const Weight& mu, const StepFunction& f) {
  const GridSpec& grid = f.grid();
  const StepFunction fm = pointwise_product(f, mu.density());
  std::vector<double> out(f.size(), 0.0);
  for (const auto& [q, t] : tau.nonzero()) {
    const double avg = cube_integral(fm, q) / q.volume();
    const auto r = cell_range(grid, q);
    for (std::size_t x = r.begin; x < r.end; ++x) out[x] += t * avg;
  }
  return StepFunction(grid, std::move(out));
}

StepFunction maximal_function(const StepFunction& f) {
  const GridSpec& grid = f.grid();
  const StepFunction a = absolute(f);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (int k = 0; k <= grid.finest_level(); ++k) {
      const DyadicCube q = cube_containing_cell(grid, x, k);
      out[x] = std::max(out[x], cube_integral(a, q) / q.volume());
    }
  }
  return StepFunction(grid, std::move(out));
}

double ap_characteristic(const Weight& w, double p) {
  const GridSpec& grid = w.grid();
  const double e = 1.0 - p / (p - 1.0);
  std::vector<double> sv(w.size());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = std::pow(w[i], e);
  const StepFunction sigma(grid, std::move(sv));
  double best = 0.0;
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (const DyadicCube& q : cubes_at_level(grid, k)) {
      const double v = cube_integral(w.density(), q) / q.volume() * std::pow(cube_integral(sigma, q) / q.volume(), p - 1.0);
      best = std::max(best, v);
    }
  }
  return best;
}

double ainfty_characteristic(const Weight& w) {
  const GridSpec& grid = w.grid();
  double best = 0.0;
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (const DyadicCube& q : cubes_at_level(grid, k)) {
      const auto r = cell_range(grid, q);
      double total = 0.0;
      for (std::size_t x = r.begin; x < r.end; ++x) {
        double m = 0.0;
        for (int j = k; j <= grid.finest_level(); ++j) {
          const DyadicCube sub = cube_containing_cell(grid, x, j);
          m = std::max(m, cube_integral(w.density(), sub) / sub.volume());
        }
        total += m;
      }
      best = std::max(best, total * grid.cell_volume() / cube_integral(w.density(), q));
    }
  }
  return best;
}

TestingReport testing_constant(const TauCoefficients& tau, const Weight& u, const Weight& v, double q) {
  const GridSpec& grid = u.grid();
  TestingReport best;
  best.value = -1.0;
  for (int k = 0; k <= grid.finest_level(); ++k) {
    for (const DyadicCube& r : cubes_at_level(grid, k)) {
      std::vector<double> local(u.size(), 0.0);
      for (const auto& [cube, t] : tau.nonzero()) {
        if (!r.contains(cube)) continue;
        const double avg = cube_integral(u.density(), cube) / cube.volume();
        const auto range = cell_range(grid, cube);
        for (std::size_t x = range.begin; x < range.end; ++x) local[x] += t * avg;
      }
      double norm_q = 0.0;
      for (std::size_t x = 0; x < local.size(); ++x) norm_q += std::pow(local[x], q) * v[x];
      const double value = std::pow(norm_q * grid.cell_volume(), 1.0 / q) / std::pow(cube_integral(u.density(), r), 1.0 / q);
      if (value > best.value) {
        best.value = value;
        best.witness = r;
      }
    }
  }
  return best;
}

}  // namespace czlab::serial
