#include "specrec/decoders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

namespace specrec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::size_t> nonzero_support(const VecC& z) {
  std::vector<std::size_t> s;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z[i] != cplx(0, 0)) s.push_back(std::size_t(i));
  return s;
}

// argmax of |v| scanning ascending with strict >, i.e. smallest ordinal wins ties
std::size_t argmax_abs(const VecC& v) {
  std::size_t best = 0;
  double bm = std::abs(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > bm) {
      bm = a;
      best = std::size_t(i);
    }
  }
  return best;
}

// indices of the `count` largest magnitudes, ties by smaller index
std::vector<std::size_t> top_k_abs(const VecC& v, std::size_t count) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t(0));
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + count, idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ma = std::abs(v[a]), mb = std::abs(v[b]);
                      if (ma != mb) return ma > mb;
                      return a < b;
                    });
  idx.resize(count);
  return idx;
}

}  // namespace

void write_diagnostics(std::ostream& os, const DecoderResult& result) {
  for (const auto& rec : result.trace)
    os << result.decoder_name << ',' << rec.index << ',' << rec.objective << ',' << rec.residual
       << ',' << rec.inner_iterations << '\n';
}

cplx soft_shrink(cplx x, double t) {
  const double a = std::abs(x);
  if (a <= t) return cplx(0, 0);
  return x * ((a - t) / a);
}

void dual_project(VecC& q) {
  const double n = q.norm();
  if (n > 1.0) q /= n;
}

double rlasso_objective(const LinearOperator& A, const VecC& y, double lambda, const VecC& z) {
  return (A.apply(z) - y).norm() + z.lpNorm<1>() / lambda;
}

PdhgmOut pdhgm(const LinearOperator& A, const VecC& y, double lambda, double tau, double sigma,
               long K, const VecC& z0, const VecC& q0, std::optional<double> gap_target,
               int check_every) {
  if (K < 1) throw std::invalid_argument("pdhgm: K >= 1 required");
  if (tau <= 0 || sigma <= 0) throw std::invalid_argument("pdhgm: positive steps required");
  const std::size_t m = A.rows(), n = A.cols();
  VecC z = z0, q = q0, z_avg = z0, q_avg = q0;
  VecC atq(n), step(n), az(m);
  const double thresh = tau / lambda;

  PdhgmOut out;
  for (long k = 0; k < K; ++k) {
    A.apply_adjoint(q.data(), atq.data());
    VecC z_next(n);
    for (std::size_t i = 0; i < n; ++i) z_next[i] = soft_shrink(z[i] - tau * atq[i], thresh);
    step = 2.0 * z_next - z;
    A.apply(step.data(), az.data());
    q = q + sigma * az - sigma * y;
    dual_project(q);
    z = std::move(z_next);
    z_avg = (double(k) * z_avg + z) / double(k + 1);
    q_avg = (double(k) * q_avg + q) / double(k + 1);
    out.iterations = k + 1;

    if (!z.allFinite() || !q.allFinite())
      throw DivergenceError("pdhgm: non-finite iterate", int(k));

    if (gap_target && (k + 1) % check_every == 0) {
      // primal value of the averaged iterate minus a feasible dual value
      const double primal = rlasso_objective(A, y, lambda, z_avg);
      A.apply_adjoint(q_avg.data(), atq.data());
      double linf = 0.0;
      for (std::size_t i = 0; i < n; ++i) linf = std::max(linf, std::abs(atq[i]));
      const double scale = std::max({1.0, lambda * linf, q_avg.norm()});
      // feasible dual value is -Re<q_hat, y> with q_hat = q_avg / scale
      const double gap = primal + std::real(q_avg.dot(y)) / scale;
      if (gap < *gap_target) {
        out.stopped_early = true;
        break;
      }
    }
  }
  out.z_avg = std::move(z_avg);
  out.q_avg = std::move(q_avg);
  return out;
}

DecoderResult restarted_pdhgm(const LinearOperator& A, const VecC& y, const RLassoConfig& cfg) {
  if (cfg.lambda <= 0 || cfg.restarts < 1 || cfg.beta < 1 || cfg.alpha <= 0)
    throw std::invalid_argument("restarted_pdhgm: invalid config");
  const auto t0 = Clock::now();
  DecoderResult res;
  res.decoder_name = "rlasso";

  const double norm_a =
      cfg.operator_norm ? *cfg.operator_norm : A.spectral_norm(200, 1e-6, 1);
  const double tau0 = 1.0 / norm_a;

  VecC z = VecC::Zero(A.cols()), q = VecC::Zero(A.rows());
  double eps = y.norm();  // objective at z0 = 0
  double best_obj = eps;
  VecC best_z = z;

  if (eps > 0) {
    for (int r = 1; r <= cfg.restarts; ++r) {
      const double delta = std::pow(2.0 * eps / cfg.alpha, 1.0 / cfg.beta);
      eps /= std::numbers::e;
      double kreal = std::ceil(2.0 * delta * norm_a / eps);
      long K = (kreal > double(cfg.inner_cap)) ? cfg.inner_cap : long(kreal);
      if (kreal > double(cfg.inner_cap)) res.budget_exhausted = true;
      K = std::max<long>(K, 1);
      auto out = pdhgm(A, y, cfg.lambda, tau0 * delta, tau0 / delta, K, z, q, eps,
                       cfg.gap_check_every);
      z = std::move(out.z_avg);
      q = std::move(out.q_avg);
      res.iterations += out.iterations;
      const double obj = rlasso_objective(A, y, cfg.lambda, z);
      if (obj < best_obj) {
        best_obj = obj;
        best_z = z;
      }
      res.trace.push_back(
          {r, best_obj, (A.apply(z) - y).norm(), out.iterations});
      if (eps < 1e-280) break;  // schedule exhausted to double-precision depth
    }
  }

  res.coefficients = std::move(best_z);
  res.support = nonzero_support(res.coefficients);
  res.wall_s = seconds_since(t0);
  return res;
}

DecoderResult omp(const LinearOperator& A, const VecC& y, const OmpConfig& cfg) {
  const std::size_t m = A.rows(), n = A.cols();
  if (cfg.steps < 1 || std::size_t(cfg.steps) > std::min(m, n))
    throw std::invalid_argument("omp: K must be in [1, min(m, |J|)]");
  const auto t0 = Clock::now();
  DecoderResult res;
  res.decoder_name = "omp";

  CholState state;
  std::vector<std::size_t> sorted;  // support in ascending order
  VecC r = y, corr(n), col(m), az(m);
  std::vector<cplx> gram_sorted, gram_ins, zvals_sorted;
  double prev_res = y.norm();

  for (long k = 0; k < cfg.steps; ++k) {
    A.apply_adjoint(r.data(), corr.data());
    const std::size_t jstar = argmax_abs(corr);
    if (state.support.end() !=
        std::find(state.support.begin(), state.support.end(), jstar))
      break;  // stagnation: residual is orthogonal to every remaining useful column

    A.column(jstar, col.data());
    auto insert_pos = std::lower_bound(sorted.begin(), sorted.end(), jstar);
    sorted.insert(insert_pos, jstar);

    gram_sorted.resize(sorted.size());
    A.apply_adjoint_restricted(col.data(), {sorted.data(), sorted.size()}, gram_sorted.data());
    gram_ins.resize(sorted.size());
    for (std::size_t i = 0; i < state.support.size(); ++i) {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), state.support[i]);
      gram_ins[i] = gram_sorted[std::size_t(it - sorted.begin())];
    }
    {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), jstar);
      gram_ins[state.support.size()] = gram_sorted[std::size_t(it - sorted.begin())];
    }
    cplx rhs(0, 0);
    for (std::size_t l = 0; l < m; ++l) rhs += std::conj(col[l]) * y[l];
    chol_insert(state, jstar, gram_ins.data(), rhs);

    const auto zs = chol_solve(state);
    zvals_sorted.resize(sorted.size());
    for (std::size_t i = 0; i < state.support.size(); ++i) {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), state.support[i]);
      zvals_sorted[std::size_t(it - sorted.begin())] = zs[i];
    }
    A.apply_restricted({sorted.data(), sorted.size()}, zvals_sorted.data(), az.data());
    r = y - az;
    const double res_norm = r.norm();
    res.iterations = k + 1;
    res.trace.push_back({int(k + 1), res_norm, res_norm, 1});

    if (cfg.stop_rel_decrease > 0 && prev_res > 0 &&
        (prev_res - res_norm) < cfg.stop_rel_decrease * prev_res)
      break;
    prev_res = res_norm;
  }

  res.coefficients = VecC::Zero(n);
  if (!state.support.empty()) {
    const auto zs = chol_solve(state);
    for (std::size_t i = 0; i < state.support.size(); ++i)
      res.coefficients[Eigen::Index(state.support[i])] = zs[i];
  }
  res.support = sorted;
  res.wall_s = seconds_since(t0);
  return res;
}

DecoderResult cosamp(const LinearOperator& A, const VecC& y, const CosampConfig& cfg) {
  const std::size_t m = A.rows(), n = A.cols();
  if (cfg.sparsity < 1 || cfg.iterations < 1)
    throw std::invalid_argument("cosamp: sparsity and iterations must be >= 1");
  const std::size_t nn = std::size_t(cfg.sparsity);
  const auto t0 = Clock::now();
  DecoderResult res;
  res.decoder_name = "cosamp";
  res.warning = (3 * nn > m);  // 3n <= m recommended

  std::vector<std::size_t> support;  // ascending
  std::vector<cplx> zvals;           // aligned with support
  VecC az(m), r(m), corr(n);

  for (int k = 0; k < cfg.iterations; ++k) {
    if (support.empty())
      az.setZero();
    else
      A.apply_restricted({support.data(), support.size()}, zvals.data(), az.data());
    r = az - y;
    A.apply_adjoint(r.data(), corr.data());

    auto cand = top_k_abs(corr, 2 * nn);
    cand.insert(cand.end(), support.begin(), support.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::vector<cplx> x0(cand.size(), cplx(0, 0));
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto it = std::lower_bound(cand.begin(), cand.end(), support[i]);
      x0[std::size_t(it - cand.begin())] = zvals[i];
    }
    std::span<const std::size_t> cand_span{cand.data(), cand.size()};
    auto applyS = [&](const cplx* xin, cplx* yout) { A.apply_restricted(cand_span, xin, yout); };
    auto adjS = [&](const cplx* rin, cplx* xout) {
      A.apply_adjoint_restricted(rin, cand_span, xout);
    };
    std::vector<cplx> yv(y.data(), y.data() + m);
    auto ls = lsqr_solve(m, cand.size(), applyS, adjS, yv, x0, cfg.lsq_tol, cfg.lsq_iters);
    if (!ls.converged) res.warning = true;

    Eigen::Map<const VecC> u(ls.x.data(), Eigen::Index(ls.x.size()));
    auto keep = top_k_abs(u, nn);
    std::sort(keep.begin(), keep.end());
    support.clear();
    zvals.clear();
    for (std::size_t i : keep) {
      if (ls.x[i] == cplx(0, 0)) continue;
      support.push_back(cand[i]);
      zvals.push_back(ls.x[i]);
    }
    res.iterations = k + 1;
    res.trace.push_back({k + 1, ls.residual_norm, ls.residual_norm, ls.iterations});
  }

  res.coefficients = VecC::Zero(n);
  for (std::size_t i = 0; i < support.size(); ++i)
    res.coefficients[Eigen::Index(support[i])] = zvals[i];
  res.support = support;
  res.wall_s = seconds_since(t0);
  return res;
}

DecoderResult run_decoder(const LinearOperator& A, const VecC& y, const DecoderConfig& cfg) {
  if (std::holds_alternative<RLassoConfig>(cfg))
    return restarted_pdhgm(A, y, std::get<RLassoConfig>(cfg));
  if (std::holds_alternative<OmpConfig>(cfg)) return omp(A, y, std::get<OmpConfig>(cfg));
  return cosamp(A, y, std::get<CosampConfig>(cfg));
}

DecodeOutput decode(const Dictionary& dict, const IndexSet& J, const SamplePoints& X,
                    const std::vector<double>& raw_values, const DecoderConfig& cfg,
                    Precision precision) {
  if (raw_values.size() != X.m) throw std::invalid_argument("decode: values/samples mismatch");
  SamplingOperator A(dict, J, X, precision);
  VecC y(X.m);
  const double inv_sqrt_m = 1.0 / std::sqrt(double(X.m));
  for (std::size_t l = 0; l < X.m; ++l)
    y[Eigen::Index(l)] = inv_sqrt_m * dict.precondition_weight(X.point(l)) * raw_values[l];

  DecodeOutput out;
  out.result = run_decoder(A, y, cfg);

  // synthesizer over the original basis (drop the 1/phi preconditioning)
  std::vector<std::pair<MultiIndex, cplx>> terms;
  for (std::size_t j : out.result.support)
    terms.emplace_back(J[j], out.result.coefficients[Eigen::Index(j)]);
  const DictKind kind = dict.kind;
  const int d = dict.dim;
  out.synthesize = [terms, kind, d](const double* x) {
    Dictionary plain{kind == DictKind::LegendrePreconditioned ? DictKind::LegendrePreconditioned
                                                              : kind,
                     d, std::nullopt};
    cplx acc(0, 0);
    for (const auto& [k, c] : terms) {
      cplx v(1, 0);
      for (int i = 0; i < d; ++i) {
        if (kind == DictKind::LegendrePreconditioned)
          v *= legendre_orthonormal(k[i], x[i]);
        else
          v *= plain.atom_factor(k[i], x[i]);
      }
      acc += c * v;
    }
    return acc;
  };
  return out;
}

}  // namespace specrec
