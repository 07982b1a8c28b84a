#include "specrec/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace specrec {

namespace {

// Incremental LDL^H factors of G_S - shift*I along the enumeration path,
// one pivot per depth. Pivot signs give the inertia (Sylvester), so a leaf
// can certify that all eigenvalues stay inside (1 - delta, 1 + delta)
// without an eigensolve.
struct ShiftedFactor {
  double shift = 0.0;
  std::vector<std::vector<cplx>> rows;  // rows[t]: length-t unit-lower row
  std::vector<double> pivots;
  std::vector<char> valid;     // breakdown-free up to this depth
  std::vector<char> all_side;  // all pivots so far on the expected side

  void reset(double s) {
    shift = s;
    rows.clear();
    pivots.clear();
    valid.clear();
    all_side.clear();
  }

  // extend with the bordered row of G restricted to path+{j}; `negative`
  // selects which pivot sign certifies "no eigenvalue past the shift"
  void push(const Eigen::MatrixXcd& G, const std::vector<int>& path, int j, bool negative) {
    const std::size_t t = rows.size();
    std::vector<cplx> w(t), lrow(t);
    bool ok = t == 0 || (valid.back() != 0);
    for (std::size_t i = 0; i < t; ++i) {
      cplx s = G(path[i], j);
      for (std::size_t p = 0; p < i; ++p) s -= rows[i][p] * w[p];
      w[i] = s;
    }
    double d = G(j, j).real() - shift;
    for (std::size_t i = 0; i < t; ++i) {
      if (std::abs(pivots[i]) < 1e-10) {
        ok = false;
        break;
      }
      lrow[i] = std::conj(w[i]) / pivots[i];
      d -= std::norm(w[i]) / pivots[i];
    }
    const bool side = negative ? (d < 0.0) : (d > 0.0);
    rows.push_back(std::move(lrow));
    pivots.push_back(d);
    valid.push_back(ok && std::abs(d) >= 1e-10);
    all_side.push_back((t == 0 ? side : (all_side.back() && side)) ? 1 : 0);
  }

  void pop() {
    rows.pop_back();
    pivots.pop_back();
    valid.pop_back();
    all_side.pop_back();
  }

  bool certifies() const { return !valid.empty() && valid.back() && all_side.back(); }
};

double support_deviation(const Eigen::MatrixXcd& G, const std::vector<int>& s) {
  const int n = int(s.size());
  Eigen::MatrixXcd gs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gs(i, j) = G(s[i], s[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gs, Eigen::EigenvaluesOnly);
  return std::max(es.eigenvalues().maxCoeff() - 1.0, 1.0 - es.eigenvalues().minCoeff());
}

struct RipSearch {
  const Eigen::MatrixXcd& G;
  int N, n;
  double best = 0.0;
  std::vector<int> path;
  ShiftedFactor hi, lo;  // shifts 1 + best and 1 - best

  explicit RipSearch(const Eigen::MatrixXcd& g, int nn) : G(g), N(int(g.cols())), n(nn) {
    hi.reset(1.0 + best);
    lo.reset(1.0 - best);
  }

  void refactor_path() {
    hi.reset(1.0 + best);
    lo.reset(1.0 - best);
    std::vector<int> p;
    for (int j : path) {
      hi.push(G, p, j, /*negative=*/true);
      lo.push(G, p, j, /*negative=*/false);
      p.push_back(j);
    }
  }

  void dfs(int first) {
    const int depth = int(path.size());
    for (int j = first; j <= N - (n - depth); ++j) {
      hi.push(G, path, j, true);
      lo.push(G, path, j, false);
      path.push_back(j);
      if (int(path.size()) == n) {
        // skip only when both factors certify eigenvalues inside the bracket
        if (!(hi.certifies() && lo.certifies())) {
          const double dev = support_deviation(G, path);
          if (dev > best) {
            best = dev;
            refactor_path();
          }
        }
      } else {
        dfs(j + 1);
      }
      path.pop_back();
      hi.pop();
      lo.pop();
    }
  }
};

}  // namespace

double rip_constant_bruteforce(const Eigen::MatrixXcd& A, int n, const RipOptions& opts) {
  const int N = int(A.cols());
  if (n < 1 || n > N) throw std::invalid_argument("rip_constant_bruteforce: need 1 <= n <= N");
  if (!opts.override_budget &&
      (std::size_t(N) > opts.max_cols || n > opts.max_sparsity))
    throw BudgetError("rip_constant_bruteforce: enumeration budget exceeded (N=" +
                      std::to_string(N) + ", n=" + std::to_string(n) + ")");

  const Eigen::MatrixXcd G = A.adjoint() * A;
  if (n == 1) {
    double d = 0.0;
    for (int i = 0; i < N; ++i) d = std::max(d, std::abs(G(i, i).real() - 1.0));
    return d;
  }

  RipSearch search(G, n);
  // seed the incumbent from a handful of supports so the inertia test prunes
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::vector<int> ids(static_cast<std::size_t>(N));
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<int> s(ids.begin(), ids.begin() + n);
  search.best = support_deviation(G, s);
  for (int t = 0; t < 200; ++t) {
    std::shuffle(ids.begin(), ids.end(), rng);
    s.assign(ids.begin(), ids.begin() + n);
    std::sort(s.begin(), s.end());
    search.best = std::max(search.best, support_deviation(G, s));
  }
  search.refactor_path();
  search.dfs(0);
  return search.best;
}

NSPConstants nsp_from_rip(double delta) {
  if (delta < 0.0 || delta >= 1.0 / 3.0)
    throw std::domain_error("nsp_from_rip: requires 0 <= delta < 1/3");
  NSPConstants c;
  c.delta = delta;
  c.rho = delta / (1.0 - 2.0 * delta);
  c.tau = std::sqrt(1.0 + delta) / (1.0 - 2.0 * delta);
  return c;
}

NspReport nsp_empirical_check(const Eigen::MatrixXcd& A, int n, const NSPConstants& c, int trials,
                              std::uint64_t seed) {
  const int N = int(A.cols());
  if (n < 1 || n > N || trials < 1) throw std::invalid_argument("nsp_empirical_check: bad inputs");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<int> ids(static_cast<std::size_t>(N));
  std::iota(ids.begin(), ids.end(), 0);

  NspReport rep;
  rep.trials = trials;
  Eigen::VectorXcd v(N);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < N; ++i) v[i] = cplx(gauss(rng), gauss(rng));
    std::shuffle(ids.begin(), ids.end(), rng);

    double on_sq = 0.0, off_l1 = 0.0;
    for (int i = 0; i < N; ++i) {
      if (i < n)
        on_sq += std::norm(v[ids[std::size_t(i)]]);
      else
        off_l1 += std::abs(v[ids[std::size_t(i)]]);
    }
    const double lhs = std::sqrt(on_sq);
    const double rhs = c.rho / std::sqrt(double(n)) * off_l1 + c.tau * (A * v).norm();
    if (lhs > rhs * (1.0 + 1e-12)) {
      if (rep.violations == 0) {
        rep.witness_v = v;
        rep.witness_support.assign(ids.begin(), ids.begin() + n);
        rep.witness_lhs = lhs;
        rep.witness_rhs = rhs;
      }
      ++rep.violations;
    }
  }
  return rep;
}

LambdaRule rlasso_lambda(double tau, double rho, double n) {
  if (tau <= 0.0 || rho < 0.0 || rho >= 1.0 || n <= 0.0)
    throw std::invalid_argument("rlasso_lambda: bad inputs");
  LambdaRule r;
  r.lambda = 3.0 * tau * std::sqrt(n);
  r.threshold = (3.0 + rho) / (1.0 + rho) * tau * std::sqrt(n);
  r.clears_threshold = r.lambda >= r.threshold;
  return r;
}

long sample_complexity_upper(double B, double n, double J_size, double gamma, double alpha) {
  if (B <= 0.0 || n <= 0.0 || J_size <= 0.0 || alpha <= 0.0 || gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("sample_complexity_upper: bad inputs");
  const double b2n = B * B * n;
  if (b2n <= 1.0) throw std::domain_error("sample_complexity_upper: requires B^2 n > 1");
  const double l = std::log(b2n);
  const double rhs = alpha * B * B * n * (l * l * std::log(J_size) + std::log(std::log(b2n) / gamma));
  return long(std::ceil(rhs));
}

long sample_complexity_fourier(double d, double n, double D, double alpha) {
  if (d <= 0.0 || n <= 0.0 || D <= 0.0 || alpha <= 0.0)
    throw std::invalid_argument("sample_complexity_fourier: bad inputs");
  const double l = std::log(n + 1.0);
  return long(std::ceil(alpha * d * n * l * l * std::log(D + 1.0)));
}

IoBound io_lower_bound(double n, double N, double C, IoMode mode) {
  if (n <= 0.0 || N <= 0.0 || C <= 0.0) throw std::invalid_argument("io_lower_bound: bad inputs");
  IoBound b;
  if (N <= 4.0 * n) {
    b.degenerate = true;
    return b;
  }
  const double denom =
      mode == IoMode::SameNorm ? 4.0 * std::log(2.0 * C + 3.0) : 4.0 * std::log(12.0 * C + 7.0);
  b.m = long(std::ceil(n * std::log(N / (4.0 * n)) / denom));
  return b;
}

SubsetFamily subset_family(int N, int n, std::uint64_t seed, long draw_budget) {
  if (n < 1 || 2 * n > N) throw std::invalid_argument("subset_family: requires 1 <= n <= N/2");
  SubsetFamily fam;
  fam.target = std::size_t(std::ceil(std::pow(double(N) / (4.0 * n), double(n) / 2.0)));
  fam.target = std::max<std::size_t>(fam.target, 1);

  std::mt19937_64 rng(seed);
  std::vector<int> ids(static_cast<std::size_t>(N));
  std::iota(ids.begin(), ids.end(), 0);
  for (long draw = 0; draw < draw_budget && fam.sets.size() < fam.target; ++draw) {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> s(ids.begin(), ids.begin() + n);
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (const auto& kept : fam.sets) {
      int inter = 0;
      std::size_t a = 0, b = 0;
      while (a < s.size() && b < kept.size()) {
        if (s[a] == kept[b]) {
          ++inter;
          ++a;
          ++b;
        } else if (s[a] < kept[b]) {
          ++a;
        } else {
          ++b;
        }
      }
      if (2 * inter >= n) {
        ok = false;
        break;
      }
    }
    if (ok) fam.sets.push_back(std::move(s));
  }
  fam.complete = fam.sets.size() >= fam.target;
  return fam;
}

}  // namespace specrec
