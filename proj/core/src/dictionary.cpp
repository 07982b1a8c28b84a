#include "specrec/dictionary.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>

namespace specrec {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double legendre_orthonormal(int k, double x) {
  // three-term recurrence (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
  double pm1 = 1.0, p = x;
  if (k == 0) return 1.0;
  for (int j = 1; j < k; ++j) {
    const double pn = ((2 * j + 1) * x * p - j * pm1) / (j + 1);
    pm1 = p;
    p = pn;
  }
  return std::sqrt(2.0 * k + 1.0) * p;
}

double Dictionary::atom_factor_real(int k, double x) const {
  switch (kind) {
    case DictKind::Chebyshev: {
      if (x < -1.0 || x > 1.0) throw DomainError("Chebyshev atom: x outside [-1,1]");
      if (k < 0) throw DomainError("Chebyshev atom: negative index");
      const double v = std::cos(k * std::acos(x));
      return k == 0 ? v : std::sqrt(2.0) * v;
    }
    case DictKind::LegendrePreconditioned: {
      if (x < -1.0 || x > 1.0) throw DomainError("Legendre atom: x outside [-1,1]");
      if (x == -1.0 || x == 1.0) throw PoleError("Legendre preconditioning pole at |x|=1");
      if (k < 0) throw DomainError("Legendre atom: negative index");
      // L_k(x) / (phi_tilde(x)/sqrt(3)), phi_tilde = sqrt(6/pi)(1-x^2)^{-1/4}
      const double env = std::sqrt(3.0) * std::sqrt(kPi / 6.0) * std::pow(1.0 - x * x, 0.25);
      return legendre_orthonormal(k, x) * env;
    }
    case DictKind::Fourier:
      throw std::logic_error("atom_factor_real: Fourier atoms are complex");
  }
  return 0.0;
}

cplx Dictionary::atom_factor(int k, double x) const {
  if (kind == DictKind::Fourier) {
    if (x < 0.0 || x >= 1.0) {
      // tolerate torus wrap-around rather than erroring on x==1-eps rounding
      x -= std::floor(x);
    }
    return std::polar(1.0, kTwoPi * k * x);
  }
  return cplx(atom_factor_real(k, x), 0.0);
}

cplx Dictionary::atom_eval(const MultiIndex& k, const double* x) const {
  if (static_cast<int>(k.size()) != dim)
    throw std::invalid_argument("atom_eval: index length != dim");
  cplx v(1.0, 0.0);
  for (int i = 0; i < dim; ++i) v *= atom_factor(k[i], x[i]);
  return v;
}

double Dictionary::uniform_bound() const {
  switch (kind) {
    case DictKind::Fourier:
      return 1.0;
    case DictKind::Chebyshev:
      return std::pow(std::sqrt(2.0), dim);
    case DictKind::LegendrePreconditioned:
      return std::pow(3.0, dim / 2.0);
  }
  return 1.0;
}

double Dictionary::precondition_weight(const double* x) const {
  if (kind != DictKind::LegendrePreconditioned) return 1.0;
  double w = 1.0;
  for (int i = 0; i < dim; ++i) {
    const double xi = x[i];
    if (xi <= -1.0 || xi >= 1.0) throw PoleError("precondition_weight: pole at |x|=1");
    // 1/phi per coordinate: sqrt(3) * sqrt(pi/6) * (1-x^2)^{1/4}
    w *= std::sqrt(kPi / 2.0) * std::pow(1.0 - xi * xi, 0.25);
  }
  return w;
}

std::string Dictionary::kind_name() const {
  switch (kind) {
    case DictKind::Fourier:
      return grid_D ? "fourier-grid" : "fourier";
    case DictKind::Chebyshev:
      return "chebyshev";
    case DictKind::LegendrePreconditioned:
      return "legendre-pre";
  }
  return "?";
}

Dictionary make_fourier(int d, std::optional<int> grid_D) {
  if (d < 1) throw std::invalid_argument("make_fourier: d >= 1 required");
  if (grid_D && *grid_D < 1) throw std::invalid_argument("make_fourier: grid D >= 1 required");
  return Dictionary{DictKind::Fourier, d, grid_D};
}

Dictionary make_chebyshev(int d) {
  if (d < 1) throw std::invalid_argument("make_chebyshev: d >= 1 required");
  return Dictionary{DictKind::Chebyshev, d, std::nullopt};
}

Dictionary make_legendre_preconditioned(int d) {
  if (d < 1) throw std::invalid_argument("make_legendre_preconditioned: d >= 1 required");
  return Dictionary{DictKind::LegendrePreconditioned, d, std::nullopt};
}

SamplePoints draw_samples(const Dictionary& dict, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("draw_samples: m >= 1 required");
  SamplePoints sp;
  sp.dim = dict.dim;
  sp.m = m;
  sp.seed = seed;
  sp.pts.resize(m * dict.dim);
  std::mt19937_64 rng(seed);
  if (dict.kind == DictKind::Fourier && dict.grid_D) {
    const int D = *dict.grid_D;
    std::uniform_int_distribution<int> u(0, 2 * D);
    for (auto& v : sp.pts) v = u(rng) / (2.0 * D);
    sp.sampler_id = "fourier-grid-D" + std::to_string(D);
  } else if (dict.kind == DictKind::Fourier) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : sp.pts) v = u(rng);
    sp.sampler_id = "uniform-torus";
  } else {
    // arcsine density on [-1,1]: x = cos(pi u); shared by the Chebyshev measure
    // and the preconditioned-Legendre measure phi^2 dmu (they coincide).
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : sp.pts) v = std::cos(kPi * u(rng));
    sp.sampler_id = "arcsine";
  }
  return sp;
}

void SamplePoints::save_binary(std::ostream& os) const {
  os << "m=" << m << " d=" << dim << " seed=" << seed << " sampler=" << sampler_id << "\n";
  os.write(reinterpret_cast<const char*>(pts.data()),
           static_cast<std::streamsize>(pts.size() * sizeof(double)));
}

SamplePoints SamplePoints::load_binary(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("SamplePoints: empty stream");
  SamplePoints sp;
  char sampler[128] = {0};
  if (std::sscanf(header.c_str(), "m=%zu d=%d seed=%llu sampler=%127s", &sp.m, &sp.dim,
                  reinterpret_cast<unsigned long long*>(&sp.seed), sampler) != 4)
    throw std::runtime_error("SamplePoints: bad header: " + header);
  sp.sampler_id = sampler;
  sp.pts.resize(sp.m * sp.dim);
  is.read(reinterpret_cast<char*>(sp.pts.data()),
          static_cast<std::streamsize>(sp.pts.size() * sizeof(double)));
  if (!is) throw std::runtime_error("SamplePoints: truncated stream");
  return sp;
}

}  // namespace specrec
