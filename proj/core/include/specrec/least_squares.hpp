#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "specrec/dictionary.hpp"

namespace specrec {

struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incrementally grown Cholesky factor of the support Gram matrix B^H B,
// packed lower-triangular row-major, plus cached right-hand side B^H y.
struct CholState {
  std::vector<std::size_t> support;  // insertion order
  std::vector<cplx> factor;          // row i holds i+1 entries
  std::vector<cplx> bty;

  std::size_t size() const { return support.size(); }
};

// gram_col[i] = <b_{support[i]}, new column> for i < k, gram_col[k] = squared
// norm of the new column. Throws RankError if the Schur complement drops
// below the guard.
void chol_insert(CholState& state, std::size_t new_index, const cplx* gram_col,
                 cplx rhs_entry, double guard = 1e-12);

// Solves the normal equations on the current support against state.bty.
std::vector<cplx> chol_solve(const CholState& state);
std::vector<cplx> chol_solve(const CholState& state, const cplx* rhs);

struct LsqrResult {
  std::vector<cplx> x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

using ApplyFn = std::function<void(const cplx*, cplx*)>;

// Golub-Kahan bidiagonalization least squares min ||A x - y||, warm-started at
// x0 by solving for the correction against the deflated residual.
LsqrResult lsqr_solve(std::size_t rows, std::size_t cols, const ApplyFn& apply,
                      const ApplyFn& apply_adjoint, const std::vector<cplx>& y,
                      const std::vector<cplx>& x0, double tol = 1e-8, int max_iters = 200);

}  // namespace specrec
