#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "specrec/dictionary.hpp"
#include "specrec/multi_index.hpp"

namespace specrec {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

enum class Precision { F64, F32 };

// Abstract m x n linear map plus the column/restricted accessors the greedy
// decoders need. Implemented matrix-free by SamplingOperator and densely by
// DenseOperator (small instances, oracles).
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void apply(const cplx* z, cplx* y) const = 0;
  virtual void apply_adjoint(const cplx* r, cplx* out) const = 0;
  // Column j (normalization included).
  virtual void column(std::size_t j, cplx* out) const = 0;
  // y = sum_i zvals[i] * column(cols[i]); cols strictly increasing.
  virtual void apply_restricted(std::span<const std::size_t> cols, const cplx* zvals,
                                cplx* y) const = 0;
  // out[i] = <column(cols[i]), r>; cols strictly increasing.
  virtual void apply_adjoint_restricted(const cplx* r, std::span<const std::size_t> cols,
                                        cplx* out) const = 0;

  VecC apply(const VecC& z) const;
  VecC apply_adjoint(const VecC& r) const;

  // Power iteration on A^H A; lower estimate of the spectral norm.
  double spectral_norm(int max_iters = 100, double tol = 1e-6, std::uint64_t seed = 0,
                       bool* converged = nullptr) const;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(MatC a) : a_(std::move(a)) {}
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;
  const MatC& matrix() const { return a_; }
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  void apply(const cplx* z, cplx* y) const override;
  void apply_adjoint(const cplx* r, cplx* out) const override;
  void column(std::size_t j, cplx* out) const override;
  void apply_restricted(std::span<const std::size_t> cols, const cplx* zvals,
                        cplx* y) const override;
  void apply_adjoint_restricted(const cplx* r, std::span<const std::size_t> cols,
                                cplx* out) const override;

 private:
  MatC a_;
};

// The normalized sampling map A = m^{-1/2} w_l b_j(x^l), matrix-free. Entries
// are products of per-coordinate factor-table lookups; lexicographic column
// order lets consecutive columns share prefix products.
class SamplingOperator final : public LinearOperator {
 public:
  SamplingOperator(const Dictionary& dict, const IndexSet& J, const SamplePoints& X,
                   Precision precision = Precision::F64);
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  std::size_t rows() const override { return m_; }
  std::size_t cols() const override { return n_; }
  const Dictionary& dictionary() const { return *dict_; }
  const IndexSet& index_set() const { return *J_; }

  void apply(const cplx* z, cplx* y) const override;
  void apply_adjoint(const cplx* r, cplx* out) const override;
  void column(std::size_t j, cplx* out) const override;
  void apply_restricted(std::span<const std::size_t> cols, const cplx* zvals,
                        cplx* y) const override;
  void apply_adjoint_restricted(const cplx* r, std::span<const std::size_t> cols,
                                cplx* out) const override;

  MatC materialize(std::size_t dense_cap = std::size_t(1) << 24) const;

 private:
  template <bool Adjoint>
  void kernel(std::span<const std::size_t> cols, const cplx* in, cplx* out) const;
  template <bool Adjoint>
  void kernel_real(std::span<const std::size_t> cols, const cplx* in, cplx* out) const;

  const Dictionary* dict_;
  const IndexSet* J_;
  std::size_t m_ = 0, n_ = 0;
  int d_ = 0;
  bool real_tables_ = false;
  std::vector<int> kmin_;                    // per dim
  std::vector<std::vector<double>> tab_re_;  // per dim: (kmax-kmin+1) x m, row-major by freq
  std::vector<std::vector<double>> tab_im_;  // Fourier only
  std::vector<int> col_off_;                 // n*d flattened: frequency offset per (col, dim)
  std::vector<int> change_depth_;            // first dim where column j differs from j-1
};

}  // namespace specrec
