#pragma once

// Dense, direct-from-definition oracles. Nothing here calls the kernels it is
// used to check.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "czlab/dyadics.hpp"
#include "czlab/positive.hpp"
#include "czlab/shifts.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

Vector to_vector(const czlab::StepFunction& f);
czlab::StepFunction from_vector(const czlab::GridSpec& grid, const Vector& v);

// Value at cell x of a Haar function (0 off its cube).
double haar_at(const czlab::GridSpec& grid, const czlab::HaarFunction& h, std::size_t x);

// (S f)_x = sum_y K(x, y) f_y |cell|, K the kernel sum_Q |Q|^{-1} sum h_in(y) h_out(x),
// restricted to cubes of level in [lo, hi].
Matrix shift_matrix(const czlab::HaarShift& s, int lo = 0, int hi = 1 << 20);

// Brute force over every truncation level.
czlab::StepFunction truncation_oracle(const czlab::HaarShift& s, const czlab::StepFunction& f);

Matrix positive_matrix(const czlab::TauCoefficients& tau, const czlab::Weight& mu);

// inf_c ((phi - c) 1_Q)^*(lambda |Q|) by scanning c over cell values and all pairwise midpoints.
double oscillation_scan(const czlab::StepFunction& phi, const czlab::DyadicCube& q, double lambda);

// sup over (x, Q') pairs, enumerated cube by cube.
czlab::StepFunction local_sharp_oracle(const czlab::StepFunction& phi, const czlab::DyadicCube& q, double lambda);

// Largest singular value of f -> M(sigma f) from L^2(sigma) to L^2(w).
double weighted_spectral_norm(const Matrix& m, const czlab::Weight& w, const czlab::Weight& sigma);

// ||f -> A(sigma f)||_{L^p(sigma) -> L^p(w)} for an entrywise non-negative
// matrix: Boyd's p-norm power method from many non-negative starts.
double positive_lp_norm(const Matrix& a, const czlab::Weight& w, const czlab::Weight& sigma, double p,
                        int restarts = 40, std::uint64_t seed = 7);

// Dyadic maximal function by enumerating every cube containing every cell.
czlab::StepFunction maximal_oracle(const czlab::StepFunction& f);

}  // namespace oracle
