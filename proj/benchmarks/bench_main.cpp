// Microbenchmarks for the hot paths: the matrix-free operator kernels, the
// spectral-norm power iteration, and small decoder runs.
#include <benchmark/benchmark.h>

#include <random>

#include "specrec/decoders.hpp"
#include "specrec/sampling_operator.hpp"

using namespace specrec;

namespace {

struct Setup {
  Dictionary dict;
  IndexSet J;
  SamplePoints X;
  SamplingOperator A;
  Setup(int d, double s, std::size_t m, DictKind kind)
      : dict(kind == DictKind::Fourier      ? make_fourier(d)
             : kind == DictKind::Chebyshev  ? make_chebyshev(d)
                                            : make_legendre_preconditioned(d)),
        J(hyperbolic_cross(s, d, nullptr, kind == DictKind::Fourier, CrossWeight::MaxOne)),
        X(draw_samples(dict, m, 1)),
        A(dict, J, X) {}
};

VecC random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  VecC v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

void bm_apply(benchmark::State& state, DictKind kind) {
  Setup s(5, double(state.range(0)), std::size_t(state.range(1)), kind);
  const VecC z = random_vec(s.J.size(), 2);
  VecC y(Eigen::Index(s.A.rows()));
  for (auto _ : state) {
    s.A.apply(z.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(s.A.rows()) *
                          std::int64_t(s.A.cols()));
}

void bm_adjoint(benchmark::State& state, DictKind kind) {
  Setup s(5, double(state.range(0)), std::size_t(state.range(1)), kind);
  const VecC r = random_vec(s.A.rows(), 3);
  VecC out(Eigen::Index(s.A.cols()));
  for (auto _ : state) {
    s.A.apply_adjoint(r.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(s.A.rows()) *
                          std::int64_t(s.A.cols()));
}

void bm_spectral_norm(benchmark::State& state) {
  Setup s(5, 5.0, 4096, DictKind::Fourier);
  for (auto _ : state) benchmark::DoNotOptimize(s.A.spectral_norm(50, 1e-6, 1));
}

void bm_rlasso_small(benchmark::State& state) {
  Setup s(1, 64.0, 256, DictKind::Fourier);
  VecC z = VecC::Zero(Eigen::Index(s.J.size()));
  z[5] = cplx(1, 0);
  z[40] = cplx(0, -1);
  const VecC y = s.A.apply(z);
  RLassoConfig cfg;
  cfg.lambda = 16.0;
  for (auto _ : state) benchmark::DoNotOptimize(restarted_pdhgm(s.A, y, cfg).iterations);
}

void bm_omp_small(benchmark::State& state) {
  Setup s(3, 8.0, 1024, DictKind::Chebyshev);
  const VecC y = random_vec(s.A.rows(), 4);
  OmpConfig cfg;
  cfg.steps = 32;
  for (auto _ : state) benchmark::DoNotOptimize(omp(s.A, y, cfg).iterations);
}

}  // namespace

BENCHMARK_CAPTURE(bm_apply, fourier, DictKind::Fourier)->Args({5, 4096})->Args({8, 16384});
BENCHMARK_CAPTURE(bm_apply, chebyshev, DictKind::Chebyshev)->Args({5, 4096});
BENCHMARK_CAPTURE(bm_apply, legendre, DictKind::LegendrePreconditioned)->Args({5, 4096});
BENCHMARK_CAPTURE(bm_adjoint, fourier, DictKind::Fourier)->Args({5, 4096})->Args({8, 16384});
BENCHMARK_CAPTURE(bm_adjoint, chebyshev, DictKind::Chebyshev)->Args({5, 4096});
BENCHMARK(bm_spectral_norm);
BENCHMARK(bm_rlasso_small);
BENCHMARK(bm_omp_small);

BENCHMARK_MAIN();
