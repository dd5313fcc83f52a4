#pragma once

// Haar shift operators of parameters (m, n) on a dyadic grid.
//
// A shift is a list of cubes Q, each carrying pairs (input, output) of Haar
// functions: the input lives on a subcube R' of Q at depth n, the output on a
// subcube Q' at depth m. The operator is
//
//   S f = sum_Q |Q|^{-1} sum_pairs <f, input> output,
//
// and every pair satisfies ||input||_inf ||output||_inf <= 1.

#include <cstdint>
#include <map>
#include <vector>

#include "czlab/dyadics.hpp"

namespace czlab {

struct HaarFunction {
  DyadicCube cube;
  std::vector<double> child_values;  // one value per child, child index order
  bool cancellative = false;

  double sup_norm() const;
  bool operator==(const HaarFunction&) const = default;
};

struct ShiftPair {
  HaarFunction input;   // on R', depth n below the owning cube
  HaarFunction output;  // on Q', depth m below the owning cube
  bool operator==(const ShiftPair&) const = default;
};

struct ShiftEntry {
  DyadicCube cube;
  std::vector<ShiftPair> pairs;
  bool operator==(const ShiftEntry&) const = default;
};

class HaarShift {
 public:
  // Validates geometry and normalization. A cube Q may carry pairs only if
  // level(Q) + max(m, n) <= N - 1, so that every Haar function involved has
  // children on the grid. Entries are stored sorted by (level, code).
  HaarShift(GridSpec grid, int m, int n, bool cancellative, std::vector<ShiftEntry> entries);

  const GridSpec& grid() const noexcept { return grid_; }
  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int complexity() const noexcept { return m_ > n_ ? m_ : n_; }
  bool cancellative() const noexcept { return cancellative_; }
  const std::vector<ShiftEntry>& entries() const noexcept { return entries_; }

  bool operator==(const HaarShift&) const = default;

 private:
  GridSpec grid_;
  int m_ = 0;
  int n_ = 0;
  bool cancellative_ = false;
  std::vector<ShiftEntry> entries_;
};

// Petermichl's shift on [0,1): for each interval I,
//   f -> |I|^{-1} <f, 1_{I-} - 1_{I+}> (h_{I-} - h_{I+}),
// with h_J = 1_{J-} - 1_{J+}. Type (1, 0); an isometry on mean-zero L^2.
HaarShift build_petermichl(const GridSpec& grid);

// Every admissible pair (Q', R') of every admissible cube gets random child
// values (uniform on [-1, 1], mean removed when cancellative) rescaled to sup
// norm 1. Generation runs coarse to fine in Z-order, so the coarse levels of
// a finer grid reproduce a coarser one drawn with the same seed.
HaarShift build_random_shift(int m, int n, std::uint64_t seed, const GridSpec& grid, bool cancellative);

// sum_Q a_Q E_Q f h_Q with h_Q the L^2-normalized Haar function splitting Q
// along the first axis. Needs |a_Q| <= sqrt|Q|.
HaarShift build_paraproduct(const std::map<DyadicCube, double>& coefficients, const GridSpec& grid);

// Swaps the roles of input and output: <S f, g> = <f, S^t g>.
HaarShift transpose(const HaarShift& shift);

StepFunction apply_shift(const HaarShift& shift, const StepFunction& f);

// max over k = 0..N of |sum over cubes of level <= k of the shift terms|.
StepFunction maximal_truncation(const HaarShift& shift, const StepFunction& f);

// Largest ||input||_inf ||output||_inf over all pairs (0 for an empty shift).
double normalization_audit(const HaarShift& shift);

}  // namespace czlab
