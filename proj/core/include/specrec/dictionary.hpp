#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specrec/multi_index.hpp"

namespace specrec {

using cplx = std::complex<double>;

enum class DictKind { Fourier, Chebyshev, LegendrePreconditioned };

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An orthonormal tensor-product system: atom evaluation, uniform bound, and the
// matching sampling measure. Fourier lives on the torus [0,1)^d, the polynomial
// systems on [-1,1]^d with the arcsine (Chebyshev) measure.
struct Dictionary {
  DictKind kind = DictKind::Fourier;
  int dim = 1;
  // Fourier only: sample from the discrete grid {n/(2D) : n in {0,...,2D}}^d
  // instead of the continuous uniform measure.
  std::optional<int> grid_D;

  bool real_atoms() const { return kind != DictKind::Fourier; }
  bool on_torus() const { return kind == DictKind::Fourier; }

  // Per-coordinate factor of the atom; the Fourier factor is complex.
  cplx atom_factor(int k, double x) const;
  double atom_factor_real(int k, double x) const;  // polynomial kinds only

  cplx atom_eval(const MultiIndex& k, const double* x) const;
  double uniform_bound() const;
  // 1/phi(x) for the preconditioned system, 1 otherwise.
  double precondition_weight(const double* x) const;

  std::string kind_name() const;
};

Dictionary make_fourier(int d, std::optional<int> grid_D = std::nullopt);
Dictionary make_chebyshev(int d);
Dictionary make_legendre_preconditioned(int d);

// Orthonormal Legendre polynomial sqrt(2k+1) P_k(x) on [-1,1] (unit L2 norm
// against dx/2).
double legendre_orthonormal(int k, double x);

struct SamplePoints {
  int dim = 0;
  std::size_t m = 0;
  std::vector<double> pts;  // row-major m x dim
  std::uint64_t seed = 0;
  std::string sampler_id;

  const double* point(std::size_t l) const { return pts.data() + l * dim; }

  void save_binary(std::ostream& os) const;
  static SamplePoints load_binary(std::istream& is);
};

SamplePoints draw_samples(const Dictionary& dict, std::size_t m, std::uint64_t seed);

}  // namespace specrec
