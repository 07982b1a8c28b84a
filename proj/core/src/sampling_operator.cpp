#include "specrec/sampling_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace specrec {

VecC LinearOperator::apply(const VecC& z) const {
  if (static_cast<std::size_t>(z.size()) != cols())
    throw std::invalid_argument("apply: dimension mismatch");
  VecC y(rows());
  apply(z.data(), y.data());
  return y;
}

VecC LinearOperator::apply_adjoint(const VecC& r) const {
  if (static_cast<std::size_t>(r.size()) != rows())
    throw std::invalid_argument("apply_adjoint: dimension mismatch");
  VecC out(cols());
  apply_adjoint(r.data(), out.data());
  return out;
}

double LinearOperator::spectral_norm(int max_iters, double tol, std::uint64_t seed,
                                     bool* converged) const {
  if (max_iters < 1) throw std::invalid_argument("spectral_norm: max_iters >= 1 required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  VecC v(cols());
  for (auto& c : v) c = cplx(g(rng), g(rng));
  v /= v.norm();
  double sigma = 0.0;
  bool ok = false;
  VecC w(rows()), u(cols());
  for (int it = 0; it < max_iters; ++it) {
    apply(v.data(), w.data());
    apply_adjoint(w.data(), u.data());
    const double nw = w.norm();
    const double next = nw;  // sqrt(v^H A^H A v) with ||v|| = 1
    const double nu = u.norm();
    if (nu == 0.0) {
      sigma = 0.0;
      ok = true;
      break;
    }
    v = u / nu;
    if (it > 0 && std::abs(next - sigma) <= tol * std::max(next, 1e-300)) {
      sigma = next;
      ok = true;
      break;
    }
    sigma = next;
  }
  if (converged) *converged = ok;
  return sigma;
}

void DenseOperator::apply(const cplx* z, cplx* y) const {
  Eigen::Map<const VecC> zv(z, a_.cols());
  Eigen::Map<VecC> yv(y, a_.rows());
  yv.noalias() = a_ * zv;
}

void DenseOperator::apply_adjoint(const cplx* r, cplx* out) const {
  Eigen::Map<const VecC> rv(r, a_.rows());
  Eigen::Map<VecC> ov(out, a_.cols());
  ov.noalias() = a_.adjoint() * rv;
}

void DenseOperator::column(std::size_t j, cplx* out) const {
  Eigen::Map<VecC>(out, a_.rows()) = a_.col(j);
}

void DenseOperator::apply_restricted(std::span<const std::size_t> cols, const cplx* zvals,
                                     cplx* y) const {
  Eigen::Map<VecC> yv(y, a_.rows());
  yv.setZero();
  for (std::size_t i = 0; i < cols.size(); ++i) yv += zvals[i] * a_.col(cols[i]);
}

void DenseOperator::apply_adjoint_restricted(const cplx* r, std::span<const std::size_t> cols,
                                             cplx* out) const {
  Eigen::Map<const VecC> rv(r, a_.rows());
  for (std::size_t i = 0; i < cols.size(); ++i) out[i] = a_.col(cols[i]).dot(rv);
}

namespace {
constexpr std::size_t kRowBlock = 1024;  // fixed tile height; keeps sums deterministic
}

SamplingOperator::SamplingOperator(const Dictionary& dict, const IndexSet& J,
                                   const SamplePoints& X, Precision precision)
    : dict_(&dict), J_(&J), m_(X.m), n_(J.size()), d_(dict.dim) {
  if (J.dim() != dict.dim || X.dim != dict.dim)
    throw std::invalid_argument("SamplingOperator: dim mismatch");
  if (n_ == 0) throw std::invalid_argument("SamplingOperator: empty index set");
  real_tables_ = dict.real_atoms();

  kmin_.assign(d_, 0);
  std::vector<int> kmax(d_, 0);
  for (int t = 0; t < d_; ++t) {
    int lo = J[0][t], hi = J[0][t];
    for (const auto& k : J.indices()) {
      lo = std::min(lo, k[t]);
      hi = std::max(hi, k[t]);
    }
    kmin_[t] = lo;
    kmax[t] = hi;
  }

  const double inv_sqrt_m = 1.0 / std::sqrt(double(m_));
  tab_re_.resize(d_);
  if (!real_tables_) tab_im_.resize(d_);
  for (int t = 0; t < d_; ++t) {
    const std::size_t nk = std::size_t(kmax[t] - kmin_[t]) + 1;
    tab_re_[t].resize(nk * m_);
    if (!real_tables_) tab_im_[t].resize(nk * m_);
    for (std::size_t ki = 0; ki < nk; ++ki) {
      const int k = kmin_[t] + int(ki);
      double* re = tab_re_[t].data() + ki * m_;
      double* im = real_tables_ ? nullptr : tab_im_[t].data() + ki * m_;
      for (std::size_t l = 0; l < m_; ++l) {
        const double x = X.pts[l * d_ + t];
        // fold the row normalization into the first coordinate's table; the
        // preconditioning envelope is already part of the atom itself, so the
        // row weight appears only on the data side (see decode)
        double scale = 1.0;
        if (t == 0) scale = inv_sqrt_m;
        if (real_tables_) {
          re[l] = dict.atom_factor_real(k, x) * scale;
        } else {
          const cplx v = dict.atom_factor(k, x) * scale;
          re[l] = v.real();
          im[l] = v.imag();
        }
        if (precision == Precision::F32) {
          re[l] = double(float(re[l]));
          if (im) im[l] = double(float(im[l]));
        }
      }
    }
  }

  col_off_.resize(n_ * std::size_t(d_));
  for (std::size_t j = 0; j < n_; ++j)
    for (int t = 0; t < d_; ++t) col_off_[j * d_ + t] = J[j][t] - kmin_[t];

  change_depth_.resize(n_);
  change_depth_[0] = 0;
  for (std::size_t j = 1; j < n_; ++j) {
    int t = 0;
    while (t < d_ - 1 && col_off_[j * d_ + t] == col_off_[(j - 1) * d_ + t]) ++t;
    change_depth_[j] = t;
  }
}

template <bool Adjoint>
void SamplingOperator::kernel(std::span<const std::size_t> cols, const cplx* in,
                              cplx* out) const {
  const std::size_t nc = cols.size();
  if (!Adjoint)
    std::fill(out, out + m_, cplx(0, 0));
  else
    std::fill(out, out + nc, cplx(0, 0));

  std::vector<double> lvl((std::size_t(d_) + 1) * 2 * kRowBlock);
  std::vector<double> iobuf(2 * kRowBlock);
  std::vector<const double*> pre(d_), pim(d_);

  for (std::size_t l0 = 0; l0 < m_; l0 += kRowBlock) {
    const std::size_t L = std::min(kRowBlock, m_ - l0);
    double* __restrict br = iobuf.data();
    double* __restrict bi = iobuf.data() + kRowBlock;
    if (Adjoint) {
      for (std::size_t i = 0; i < L; ++i) {
        br[i] = in[l0 + i].real();
        bi[i] = in[l0 + i].imag();
      }
    } else {
      std::fill(br, br + L, 0.0);
      std::fill(bi, bi + L, 0.0);
    }

    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t j = cols[c];
      int cd = 0;
      if (c > 0) {
        const std::size_t jp = cols[c - 1];
        while (cd < d_ - 1 && col_off_[j * d_ + cd] == col_off_[jp * d_ + cd]) ++cd;
      }
      for (int t = cd; t < d_; ++t) {
        const std::size_t off = std::size_t(col_off_[j * d_ + t]) * m_ + l0;
        const double* __restrict fre = tab_re_[t].data() + off;
        const double* __restrict fim = tab_im_[t].data() + off;
        if (t == 0) {
          pre[0] = fre;
          pim[0] = fim;
        } else {
          double* __restrict ore = lvl.data() + std::size_t(t) * 2 * kRowBlock;
          double* __restrict oim = ore + kRowBlock;
          const double* __restrict are = pre[t - 1];
          const double* __restrict aim = pim[t - 1];
          for (std::size_t i = 0; i < L; ++i) {
            const double xr = are[i] * fre[i] - aim[i] * fim[i];
            const double xi = are[i] * fim[i] + aim[i] * fre[i];
            ore[i] = xr;
            oim[i] = xi;
          }
          pre[t] = ore;
          pim[t] = oim;
        }
      }
      const double* __restrict ar = pre[d_ - 1];
      const double* __restrict ai = pim[d_ - 1];
      if constexpr (Adjoint) {
        double sr = 0.0, si = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
          sr += ar[i] * br[i] + ai[i] * bi[i];
          si += ar[i] * bi[i] - ai[i] * br[i];
        }
        out[c] += cplx(sr, si);
      } else {
        const double zr = in[c].real(), zi = in[c].imag();
        for (std::size_t i = 0; i < L; ++i) {
          br[i] += zr * ar[i] - zi * ai[i];
          bi[i] += zr * ai[i] + zi * ar[i];
        }
      }
    }

    if (!Adjoint)
      for (std::size_t i = 0; i < L; ++i) out[l0 + i] = cplx(br[i], bi[i]);
  }
}

template <bool Adjoint>
void SamplingOperator::kernel_real(std::span<const std::size_t> cols, const cplx* in,
                                   cplx* out) const {
  const std::size_t nc = cols.size();
  if (!Adjoint)
    std::fill(out, out + m_, cplx(0, 0));
  else
    std::fill(out, out + nc, cplx(0, 0));

  std::vector<double> lvl((std::size_t(d_) + 1) * kRowBlock);
  std::vector<double> iobuf(2 * kRowBlock);
  std::vector<const double*> pre(d_);

  for (std::size_t l0 = 0; l0 < m_; l0 += kRowBlock) {
    const std::size_t L = std::min(kRowBlock, m_ - l0);
    double* __restrict br = iobuf.data();
    double* __restrict bi = iobuf.data() + kRowBlock;
    if (Adjoint) {
      for (std::size_t i = 0; i < L; ++i) {
        br[i] = in[l0 + i].real();
        bi[i] = in[l0 + i].imag();
      }
    } else {
      std::fill(br, br + L, 0.0);
      std::fill(bi, bi + L, 0.0);
    }

    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t j = cols[c];
      int cd = 0;
      if (c > 0) {
        const std::size_t jp = cols[c - 1];
        while (cd < d_ - 1 && col_off_[j * d_ + cd] == col_off_[jp * d_ + cd]) ++cd;
      }
      for (int t = cd; t < d_; ++t) {
        const double* __restrict f =
            tab_re_[t].data() + std::size_t(col_off_[j * d_ + t]) * m_ + l0;
        if (t == 0) {
          pre[0] = f;
        } else {
          double* __restrict o = lvl.data() + std::size_t(t) * kRowBlock;
          const double* __restrict a = pre[t - 1];
          for (std::size_t i = 0; i < L; ++i) o[i] = a[i] * f[i];
          pre[t] = o;
        }
      }
      const double* __restrict a = pre[d_ - 1];
      if constexpr (Adjoint) {
        double sr = 0.0, si = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
          sr += a[i] * br[i];
          si += a[i] * bi[i];
        }
        out[c] += cplx(sr, si);
      } else {
        const double zr = in[c].real(), zi = in[c].imag();
        for (std::size_t i = 0; i < L; ++i) {
          br[i] += zr * a[i];
          bi[i] += zi * a[i];
        }
      }
    }

    if (!Adjoint)
      for (std::size_t i = 0; i < L; ++i) out[l0 + i] = cplx(br[i], bi[i]);
  }
}

namespace {
std::span<const std::size_t> identity_span(std::vector<std::size_t>& scratch, std::size_t n) {
  scratch.resize(n);
  std::iota(scratch.begin(), scratch.end(), std::size_t(0));
  return {scratch.data(), n};
}
}  // namespace

void SamplingOperator::apply(const cplx* z, cplx* y) const {
  std::vector<std::size_t> scratch;
  auto cols = identity_span(scratch, n_);
  real_tables_ ? kernel_real<false>(cols, z, y) : kernel<false>(cols, z, y);
}

void SamplingOperator::apply_adjoint(const cplx* r, cplx* out) const {
  std::vector<std::size_t> scratch;
  auto cols = identity_span(scratch, n_);
  real_tables_ ? kernel_real<true>(cols, r, out) : kernel<true>(cols, r, out);
}

void SamplingOperator::apply_restricted(std::span<const std::size_t> cols, const cplx* zvals,
                                        cplx* y) const {
  real_tables_ ? kernel_real<false>(cols, zvals, y) : kernel<false>(cols, zvals, y);
}

void SamplingOperator::apply_adjoint_restricted(const cplx* r, std::span<const std::size_t> cols,
                                                cplx* out) const {
  real_tables_ ? kernel_real<true>(cols, r, out) : kernel<true>(cols, r, out);
}

void SamplingOperator::column(std::size_t j, cplx* out) const {
  const std::size_t col[1] = {j};
  const cplx one[1] = {cplx(1, 0)};
  apply_restricted({col, 1}, one, out);
}

MatC SamplingOperator::materialize(std::size_t dense_cap) const {
  if (m_ * n_ > dense_cap) throw SizeError("materialize: dense cap exceeded", m_ * n_);
  MatC a(m_, n_);
  VecC colbuf(m_);
  for (std::size_t j = 0; j < n_; ++j) {
    column(j, colbuf.data());
    a.col(j) = colbuf;
  }
  return a;
}

}  // namespace specrec
