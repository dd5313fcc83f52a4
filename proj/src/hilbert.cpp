#include "czlab/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "czlab/error.hpp"
#include "czlab/parallel.hpp"
#include "czlab/random.hpp"

namespace czlab {

StepFunction hilbert_direct(const StepFunction& f) {
  require(f.grid().dimension() == 1, ErrorKind::kInvalidArgument, "Hilbert transform needs d = 1");
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const auto v = f.values();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (j != i && v[static_cast<std::size_t>(j)] != 0.0) {
        s += v[static_cast<std::size_t>(j)] / static_cast<double>(i - j);
      }
    }
    out[static_cast<std::size_t>(i)] = s;
  }
  return StepFunction(f.grid(), std::move(out));
}

GridEnsemble::GridEnsemble(std::vector<GridSample> samples, int coarse_levels)
    : samples_(std::move(samples)), coarse_levels_(coarse_levels) {
  require(!samples_.empty(), ErrorKind::kInvalidArgument, "grid ensemble is empty");
  require(coarse_levels_ >= 0 && coarse_levels_ <= 40, ErrorKind::kInvalidArgument,
          "coarse_levels must lie in [0, 40]");
  double total = 0.0;
  for (const GridSample& s : samples_) {
    require(s.grid.dimension() == 1, ErrorKind::kInvalidArgument, "grid ensemble needs d = 1");
    require(s.grid == GridSpec(1, samples_.front().grid.finest_level(), s.grid.shift()),
            ErrorKind::kGridMismatch, "ensemble grids must share the finest level");
    require(s.dilation >= 1.0 && s.dilation < 2.0, ErrorKind::kInvalidArgument, "dilation must lie in [1, 2)");
    require(std::isfinite(s.coefficient), ErrorKind::kInvalidArgument, "coefficient must be finite");
    total += std::abs(s.coefficient);
  }
  require(total > 0.0, ErrorKind::kInvalidArgument, "ensemble coefficients are all zero");
  for (GridSample& s : samples_) s.coefficient /= total;
}

GridEnsemble GridEnsemble::random(const GridSpec& grid, std::size_t count, std::uint64_t seed, int coarse_levels) {
  require(grid.dimension() == 1, ErrorKind::kInvalidArgument, "grid ensemble needs d = 1");
  Rng rng(seed);
  std::vector<GridSample> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double shift = rng.uniform();
    const double dilation = std::exp2(rng.uniform());
    samples.push_back({GridSpec(1, grid.finest_level(), {shift}), std::min(dilation, std::nextafter(2.0, 1.0)), 1.0});
  }
  return GridEnsemble(std::move(samples), coarse_levels);
}

namespace {

// Exact integral of a step function over [0, x] for real x.
class Primitive {
 public:
  explicit Primitive(const StepFunction& f) : cells_(f.size()), cum_(f.size() + 1, 0.0) {
    const double h = 1.0 / static_cast<double>(cells_);
    for (std::size_t i = 0; i < cells_; ++i) cum_[i + 1] = cum_[i] + f[i] * h;
  }

  double operator()(double x) const {
    const double y = std::clamp(x * static_cast<double>(cells_), 0.0, static_cast<double>(cells_));
    const auto i = std::min(static_cast<std::size_t>(y), cells_ - 1);
    return cum_[i] + (cum_[i + 1] - cum_[i]) * (y - static_cast<double>(i));
  }

 private:
  std::size_t cells_;
  std::vector<double> cum_;
};

struct Support {
  double lo = 1.0;
  double hi = 0.0;
};

Support hull(const StepFunction& f, const StepFunction& g) {
  Support s;
  const double h = 1.0 / static_cast<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0 || g[i] != 0.0) {
      s.lo = std::min(s.lo, static_cast<double>(i) * h);
      s.hi = std::max(s.hi, static_cast<double>(i + 1) * h);
    }
  }
  return s;
}

// <S^omega f, g> for the Petermichl shift on one translated, dilated lattice.
double lattice_pairing(const Primitive& F, const Primitive& G, const Support& support, double beta,
                       double dilation, int coarse, int finest) {
  double total = 0.0;
  for (int k = -coarse; k <= finest - 2; ++k) {
    const double side = dilation * std::ldexp(1.0, -k);
    const double q = side / 4.0;
    const double j0 = std::floor((support.lo - beta) / side);
    const double j1 = std::floor((support.hi - beta) / side);
    double level_sum = 0.0;
    for (double j = j0; j <= j1; j += 1.0) {
      const double a = beta + j * side;
      const double fi = 2.0 * F(a + 2.0 * q) - F(a) - F(a + 4.0 * q);
      if (fi == 0.0) continue;
      const double gi = 2.0 * G(a + q) - G(a) - 2.0 * G(a + 3.0 * q) + G(a + 4.0 * q);
      level_sum += fi * gi;
    }
    total += level_sum / side;
  }
  return total;
}

void require_separated(const StepFunction& f, const StepFunction& g) {
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i] == 0.0) continue;
    const bool touches = f[i] != 0.0 || (i > 0 && f[i - 1] != 0.0) || (i + 1 < n && f[i + 1] != 0.0);
    require(!touches, ErrorKind::kPrecondition, "supports of f and g must be separated by at least one cell");
  }
}

}  // namespace

HilbertPairing hilbert_average(const GridEnsemble& ensemble, const StepFunction& f, const StepFunction& g) {
  check_same_grid(f.grid(), g.grid());
  require(f.grid().dimension() == 1, ErrorKind::kInvalidArgument, "Hilbert averaging needs d = 1");
  require(f.grid().finest_level() == ensemble.samples().front().grid.finest_level(), ErrorKind::kGridMismatch,
          "ensemble and functions use different finest levels");
  require_separated(f, g);

  const Primitive F(f);
  const Primitive G(g);
  const Support support = hull(f, g);
  const int finest = f.grid().finest_level();
  const int coarse = ensemble.coarse_levels();
  const auto& samples = ensemble.samples();
  const auto count = static_cast<std::ptrdiff_t>(samples.size());

  std::vector<double> values(samples.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const GridSample& s = samples[static_cast<std::size_t>(i)];
    const double beta = s.grid.shift()[0] * s.dilation * std::ldexp(1.0, coarse);
    values[static_cast<std::size_t>(i)] = lattice_pairing(F, G, support, beta, s.dilation, coarse, finest);
  }

  std::vector<double> weighted(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) weighted[i] = samples[i].coefficient * values[i];
  HilbertPairing out;
  out.average = pairwise_sum(weighted);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double dev = samples[i].coefficient * (values[i] - out.average);
    weighted[i] = dev * dev;
  }
  out.standard_error = std::sqrt(pairwise_sum(weighted));

  const StepFunction hf = hilbert_direct(f);
  std::vector<double> products(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) products[i] = hf[i] * g[i];
  out.direct = pairwise_sum(products) * f.grid().cell_volume();
  return out;
}

ProportionalityFit fit_proportionality(std::span<const HilbertPairing> pairs) {
  require(!pairs.empty(), ErrorKind::kInvalidArgument, "nothing to fit");
  double ab = 0.0;
  double bb = 0.0;
  for (const HilbertPairing& p : pairs) {
    ab += p.average * p.direct;
    bb += p.direct * p.direct;
  }
  require(bb > 0.0, ErrorKind::kPrecondition, "all direct pairings vanish");
  ProportionalityFit fit;
  fit.constant = ab / bb;
  for (const HilbertPairing& p : pairs) {
    const double predicted = fit.constant * p.direct;
    const double r = predicted == 0.0 ? std::abs(p.average) : std::abs(p.average - predicted) / std::abs(predicted);
    fit.relative_residuals.push_back(r);
    fit.max_residual = std::max(fit.max_residual, r);
  }
  return fit;
}

}  // namespace czlab
