#include "specrec/least_squares.hpp"

#include <cmath>
#include <string>

namespace specrec {

void chol_insert(CholState& state, std::size_t new_index, const cplx* gram_col,
                 cplx rhs_entry, double guard) {
  const std::size_t k = state.size();
  // forward substitution L u = g against the existing factor
  std::vector<cplx> u(k);
  const cplx* L = state.factor.data();
  for (std::size_t i = 0; i < k; ++i) {
    cplx s = gram_col[i];
    const cplx* row = L + i * (i + 1) / 2;
    for (std::size_t t = 0; t < i; ++t) s -= row[t] * std::conj(u[t]);
    u[i] = std::conj(s / row[i]);
  }
  double un2 = 0.0;
  for (const cplx& v : u) un2 += std::norm(v);
  const double schur = gram_col[k].real() - un2;
  if (!(schur > guard))
    throw RankError("chol_insert: Gram matrix numerically singular at step " +
                    std::to_string(k + 1));
  for (const cplx& v : u) state.factor.push_back(v);
  state.factor.push_back(cplx(std::sqrt(schur), 0.0));
  state.support.push_back(new_index);
  state.bty.push_back(rhs_entry);
}

std::vector<cplx> chol_solve(const CholState& state) { return chol_solve(state, state.bty.data()); }

std::vector<cplx> chol_solve(const CholState& state, const cplx* rhs) {
  const std::size_t k = state.size();
  const cplx* L = state.factor.data();
  std::vector<cplx> w(k);
  for (std::size_t i = 0; i < k; ++i) {
    cplx s = rhs[i];
    const cplx* row = L + i * (i + 1) / 2;
    for (std::size_t t = 0; t < i; ++t) s -= row[t] * w[t];
    w[i] = s / row[i];
  }
  // back substitution L^H x = w
  std::vector<cplx> x(k);
  for (std::size_t ii = k; ii-- > 0;) {
    cplx s = w[ii];
    for (std::size_t t = ii + 1; t < k; ++t) {
      const cplx* row = L + t * (t + 1) / 2;
      s -= std::conj(row[ii]) * x[t];
    }
    x[ii] = s / std::conj(L[ii * (ii + 1) / 2 + ii]);
  }
  return x;
}

namespace {
double nrm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}
}  // namespace

LsqrResult lsqr_solve(std::size_t rows, std::size_t cols, const ApplyFn& apply,
                      const ApplyFn& apply_adjoint, const std::vector<cplx>& y,
                      const std::vector<cplx>& x0, double tol, int max_iters) {
  if (tol <= 0) throw std::invalid_argument("lsqr_solve: tol > 0 required");
  LsqrResult res;
  res.x = x0.empty() ? std::vector<cplx>(cols, cplx(0, 0)) : x0;

  // deflate the warm start: solve min ||A dx - r0|| for the correction
  std::vector<cplx> r0(rows);
  apply(res.x.data(), r0.data());
  for (std::size_t i = 0; i < rows; ++i) r0[i] = y[i] - r0[i];

  std::vector<cplx> u = r0, v(cols), w(cols), dx(cols, cplx(0, 0)), tmp_m(rows), tmp_n(cols);
  double beta = nrm2(u);
  apply_adjoint(u.data(), v.data());
  const double atr0 = nrm2(v);  // ||A^H r0|| before normalization scaling
  if (beta == 0.0 || atr0 <= tol * std::max(beta, 1e-300)) {
    res.residual_norm = beta;
    res.converged = true;
    return res;
  }
  for (auto& c : u) c /= beta;
  apply_adjoint(u.data(), v.data());
  double alpha = nrm2(v);
  if (alpha == 0.0) {
    res.residual_norm = beta;
    res.converged = true;
    return res;
  }
  for (auto& c : v) c /= alpha;
  w = v;
  double phibar = beta, rhobar = alpha, anorm = 0.0;

  for (int it = 1; it <= max_iters; ++it) {
    // continue the bidiagonalization
    apply(v.data(), tmp_m.data());
    for (std::size_t i = 0; i < rows; ++i) u[i] = tmp_m[i] - alpha * u[i];
    beta = nrm2(u);
    if (beta > 0) {
      for (auto& c : u) c /= beta;
      apply_adjoint(u.data(), tmp_n.data());
      for (std::size_t i = 0; i < cols; ++i) v[i] = tmp_n[i] - beta * v[i];
      alpha = nrm2(v);
      if (alpha > 0)
        for (auto& c : v) c /= alpha;
    }
    anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);

    // plane rotation eliminating beta
    const double rho = std::hypot(rhobar, beta);
    const double cs = rhobar / rho, sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const double t1 = phi / rho, t2 = -theta / rho;
    for (std::size_t i = 0; i < cols; ++i) {
      dx[i] += t1 * w[i];
      w[i] = v[i] + t2 * w[i];
    }

    res.iterations = it;
    // ||A^H r|| = phibar * alpha * |cs| for the current iterate
    const double normar = phibar * alpha * std::abs(cs);
    if (normar <= tol * std::max(anorm * phibar, 1e-300)) {
      res.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < cols; ++i) res.x[i] += dx[i];
  res.residual_norm = phibar;
  return res;
}

}  // namespace specrec
