#include "czlab/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "czlab/error.hpp"
#include "czlab/random.hpp"

namespace czlab {

double HaarFunction::sup_norm() const {
  double s = 0.0;
  for (double v : child_values) s = std::max(s, std::abs(v));
  return s;
}

namespace {

constexpr double kNormalizationSlack = 1e-12;

void validate_haar(const GridSpec& grid, const HaarFunction& h, const DyadicCube& owner, int depth) {
  require(h.cube.dimension() == grid.dimension() && h.cube.level() == owner.level() + depth &&
              owner.contains(h.cube),
          ErrorKind::kGridMismatch, "Haar function cube is not at the required depth inside its owner");
  require(h.child_values.size() == static_cast<std::size_t>(grid.children_per_cube()),
          ErrorKind::kInvalidArgument, "Haar function needs one value per child");
  double sum = 0.0;
  for (double v : h.child_values) {
    require(std::isfinite(v), ErrorKind::kInvalidArgument, "Haar function values must be finite");
    sum += v;
  }
  if (h.cancellative) {
    require(std::abs(sum) <= 1e-12 * std::max(1.0, h.sup_norm()) * h.child_values.size(),
            ErrorKind::kInvalidArgument, "cancellative Haar function must have zero mean");
  }
}

}  // namespace

HaarShift::HaarShift(GridSpec grid, int m, int n, bool cancellative, std::vector<ShiftEntry> entries)
    : grid_(std::move(grid)), m_(m), n_(n), cancellative_(cancellative), entries_(std::move(entries)) {
  require(m_ >= 0 && n_ >= 0, ErrorKind::kInvalidArgument, "shift parameters must be non-negative");
  std::sort(entries_.begin(), entries_.end(),
            [](const ShiftEntry& a, const ShiftEntry& b) { return a.cube < b.cube; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ShiftEntry& e = entries_[i];
    check_membership(grid_, e.cube);
    require(i == 0 || entries_[i - 1].cube != e.cube, ErrorKind::kInvalidArgument, "duplicate shift entry");
    if (e.pairs.empty()) continue;
    require(e.cube.level() + complexity() <= grid_.finest_level() - 1, ErrorKind::kLevelOverflow,
            "shift parameters exceed grid depth at level " + std::to_string(e.cube.level()));
    for (const ShiftPair& p : e.pairs) {
      validate_haar(grid_, p.input, e.cube, n_);
      validate_haar(grid_, p.output, e.cube, m_);
      if (cancellative_) {
        require(p.input.cancellative && p.output.cancellative, ErrorKind::kInvalidArgument,
                "cancellative shift needs cancellative Haar functions");
      }
      require(p.input.sup_norm() * p.output.sup_norm() <= 1.0 + kNormalizationSlack,
              ErrorKind::kCoefficientBound, "pair violates the joint sup-norm normalization");
    }
  }
}

HaarShift build_petermichl(const GridSpec& grid) {
  require(grid.dimension() == 1, ErrorKind::kInvalidArgument, "Petermichl shift needs d = 1");
  std::vector<ShiftEntry> entries;
  for (int k = 0; k + 1 <= grid.finest_level() - 1; ++k) {
    for (std::uint64_t c = 0; c < grid.cube_count(k); ++c) {
      const auto cube = DyadicCube::from_code(1, k, c);
      const HaarFunction input{cube, {1.0, -1.0}, true};
      ShiftEntry e{cube, {}};
      e.pairs.push_back({input, HaarFunction{cube.child(0), {1.0, -1.0}, true}});
      e.pairs.push_back({input, HaarFunction{cube.child(1), {-1.0, 1.0}, true}});
      entries.push_back(std::move(e));
    }
  }
  return HaarShift(grid, 1, 0, true, std::move(entries));
}

namespace {

std::vector<double> random_haar_values(Rng& rng, int count, bool cancellative) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  if (cancellative) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= count;
    for (double& x : v) x -= mean;
  }
  double sup = 0.0;
  for (double x : v) sup = std::max(sup, std::abs(x));
  if (sup == 0.0) {
    // Measure-zero event; fall back to a fixed pattern.
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
    return v;
  }
  for (double& x : v) x /= sup;
  if (cancellative) {
    // Re-centre after scaling so the stored sum is zero to rounding.
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= count;
    for (double& x : v) x -= mean;
  }
  return v;
}

DyadicCube descendant(const DyadicCube& cube, int depth, std::uint64_t index) {
  return DyadicCube::from_code(cube.dimension(), cube.level() + depth,
                               (cube.code() << (cube.dimension() * depth)) | index);
}

}  // namespace

HaarShift build_random_shift(int m, int n, std::uint64_t seed, const GridSpec& grid, bool cancellative) {
  require(m >= 0 && n >= 0, ErrorKind::kInvalidArgument, "shift parameters must be non-negative");
  const int kappa = std::max(m, n);
  require(kappa <= grid.finest_level() - 1, ErrorKind::kLevelOverflow, "shift parameters exceed grid depth");
  const int d = grid.dimension();
  const int kids = grid.children_per_cube();
  Rng rng(seed);
  std::vector<ShiftEntry> entries;
  for (int k = 0; k + kappa <= grid.finest_level() - 1; ++k) {
    for (std::uint64_t c = 0; c < grid.cube_count(k); ++c) {
      const auto cube = DyadicCube::from_code(d, k, c);
      ShiftEntry e{cube, {}};
      for (std::uint64_t q = 0; q < (std::uint64_t{1} << (d * m)); ++q) {
        for (std::uint64_t r = 0; r < (std::uint64_t{1} << (d * n)); ++r) {
          HaarFunction input{descendant(cube, n, r), random_haar_values(rng, kids, cancellative), cancellative};
          HaarFunction output{descendant(cube, m, q), random_haar_values(rng, kids, cancellative), cancellative};
          e.pairs.push_back({std::move(input), std::move(output)});
        }
      }
      entries.push_back(std::move(e));
    }
  }
  return HaarShift(grid, m, n, cancellative, std::move(entries));
}

HaarShift build_paraproduct(const std::map<DyadicCube, double>& coefficients, const GridSpec& grid) {
  const int kids = grid.children_per_cube();
  std::vector<ShiftEntry> entries;
  for (const auto& [cube, a] : coefficients) {
    check_membership(grid, cube);
    require(std::isfinite(a) && std::abs(a) <= std::sqrt(cube.volume()) * (1.0 + kNormalizationSlack),
            ErrorKind::kCoefficientBound, "paraproduct coefficient exceeds sqrt|Q|");
    if (a == 0.0) continue;
    require(cube.level() <= grid.finest_level() - 1, ErrorKind::kLevelOverflow,
            "paraproduct coefficient on a finest cell");
    const double scale = std::min(1.0, std::abs(a) / std::sqrt(cube.volume())) * (a < 0 ? -1.0 : 1.0);
    std::vector<double> pattern(static_cast<std::size_t>(kids));
    for (int i = 0; i < kids; ++i) pattern[static_cast<std::size_t>(i)] = (i & 1) ? -scale : scale;
    ShiftEntry e{cube, {}};
    e.pairs.push_back({HaarFunction{cube, std::vector<double>(static_cast<std::size_t>(kids), 1.0), false},
                       HaarFunction{cube, std::move(pattern), true}});
    entries.push_back(std::move(e));
  }
  return HaarShift(grid, 0, 0, false, std::move(entries));
}

HaarShift transpose(const HaarShift& shift) {
  std::vector<ShiftEntry> entries = shift.entries();
  for (ShiftEntry& e : entries) {
    for (ShiftPair& p : e.pairs) std::swap(p.input, p.output);
  }
  return HaarShift(shift.grid(), shift.n(), shift.m(), shift.cancellative(), std::move(entries));
}

double normalization_audit(const HaarShift& shift) {
  double worst = 0.0;
  for (const ShiftEntry& e : shift.entries()) {
    for (const ShiftPair& p : e.pairs) worst = std::max(worst, p.input.sup_norm() * p.output.sup_norm());
  }
  return worst;
}

namespace {

// contributions[k][c] is the value, on the level-(k+m+1) cube c, of the terms
// of the cubes of level k. Distinct cubes of one level write disjoint ranges.
std::vector<std::vector<double>> level_contributions(const HaarShift& shift, const StepFunction& f) {
  check_same_grid(shift.grid(), f.grid());
  const GridSpec& grid = shift.grid();
  const int d = grid.dimension();
  const int kids = grid.children_per_cube();
  const int top = grid.finest_level() - 1 - shift.complexity();
  const double vol = grid.cell_volume();
  const CubeSums sums(f);
  const auto& entries = shift.entries();

  std::vector<std::vector<double>> contributions(static_cast<std::size_t>(std::max(top + 1, 0)));
  std::size_t begin = 0;
  for (int k = 0; k <= top; ++k) {
    auto& out = contributions[static_cast<std::size_t>(k)];
    out.assign(grid.cube_count(k + shift.m() + 1), 0.0);
    std::size_t end = begin;
    while (end < entries.size() && entries[end].cube.level() == k) ++end;
    const auto count = static_cast<std::ptrdiff_t>(end - begin);
#pragma omp parallel for schedule(static) if (count > 256)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const ShiftEntry& e = entries[begin + static_cast<std::size_t>(i)];
      const double inv_volume = 1.0 / e.cube.volume();
      for (const ShiftPair& p : e.pairs) {
        const std::uint64_t in_base = p.input.cube.code() << d;
        const int in_level = p.input.cube.level() + 1;
        double pairing = 0.0;
        for (int c = 0; c < kids; ++c) {
          pairing += p.input.child_values[static_cast<std::size_t>(c)] * sums.sum(in_level, in_base | c);
        }
        const double coeff = pairing * vol * inv_volume;
        if (coeff == 0.0) continue;
        const std::uint64_t out_base = p.output.cube.code() << d;
        for (int c = 0; c < kids; ++c) {
          out[out_base | c] += coeff * p.output.child_values[static_cast<std::size_t>(c)];
        }
      }
    }
    begin = end;
  }
  return contributions;
}

}  // namespace

StepFunction apply_shift(const HaarShift& shift, const StepFunction& f) {
  const auto contributions = level_contributions(shift, f);
  const GridSpec& grid = shift.grid();
  const int d = grid.dimension();
  const int n = grid.finest_level();
  std::vector<double> out(grid.cell_count(), 0.0);
  const auto cells = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (cells > 4096)
  for (std::ptrdiff_t x = 0; x < cells; ++x) {
    double s = 0.0;
    for (std::size_t k = 0; k < contributions.size(); ++k) {
      const int level = static_cast<int>(k) + shift.m() + 1;
      s += contributions[k][static_cast<std::uint64_t>(x) >> (d * (n - level))];
    }
    out[static_cast<std::size_t>(x)] = s;
  }
  return StepFunction(grid, std::move(out));
}

StepFunction maximal_truncation(const HaarShift& shift, const StepFunction& f) {
  const auto contributions = level_contributions(shift, f);
  const GridSpec& grid = shift.grid();
  const int d = grid.dimension();
  const int n = grid.finest_level();
  std::vector<double> out(grid.cell_count(), 0.0);
  const auto cells = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (cells > 4096)
  for (std::ptrdiff_t x = 0; x < cells; ++x) {
    double s = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < contributions.size(); ++k) {
      const int level = static_cast<int>(k) + shift.m() + 1;
      s += contributions[k][static_cast<std::uint64_t>(x) >> (d * (n - level))];
      best = std::max(best, std::abs(s));
    }
    out[static_cast<std::size_t>(x)] = best;
  }
  return StepFunction(grid, std::move(out));
}

}  // namespace czlab
