#include "specrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace specrec {

double best_n_term(const CoeffSequence& v, std::size_t n, double p) {
  if (p < 1.0) throw std::invalid_argument("best_n_term: p >= 1 required");
  std::vector<double> mags(v.values.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(v.values[i]);
  // stable sort keeps ordinal order among equal magnitudes
  std::stable_sort(mags.begin(), mags.end(), std::greater<double>());

  if (std::isinf(p)) return n < mags.size() ? mags[n] : 0.0;

  double s = 0.0;
  for (std::size_t i = n; i < mags.size(); ++i) s += std::pow(mags[i], p);
  if (p == 1.0) s += v.tail_l1;
  if (p == 2.0) s += v.tail_l2 * v.tail_l2;
  return std::pow(s, 1.0 / p);
}

double wiener_norm(const CoeffSequence& v, double theta) {
  if (theta < 1.0 || std::isinf(theta))
    throw std::invalid_argument("wiener_norm: theta in [1, inf) required");
  double s = 0.0;
  for (const cplx& c : v.values) s += std::pow(std::abs(c), theta);
  // tail in l_theta is bounded by tail in l_1; by l_2 once theta >= 2
  const double tail = theta >= 2.0 ? v.tail_l2 : v.tail_l1;
  return std::pow(s, 1.0 / theta) + tail;
}

double truncation_error(const GroundTruth& f, const IndexSet& J, TruncMode mode,
                        const IndexSet* superset) {
  if (!f.has_coeffs)
    throw std::invalid_argument("truncation_error: no coefficient oracle for " + f.name);

  if (mode == TruncMode::L2) {
    double inside = 0.0;
    for (std::size_t j = 0; j < J.size(); ++j) inside += std::norm(f.coeff(J[j]));
    return std::sqrt(std::max(f.norm_sq - inside, 0.0));
  }

  if (superset == nullptr)
    throw std::invalid_argument("truncation_error: LinfUpper requires a superset");
  // split the superset complement of J into an inner and an outer half by
  // enumeration order so the outer sum can seed a geometric tail extrapolation
  std::vector<double> outside;
  for (std::size_t j = 0; j < superset->size(); ++j) {
    const MultiIndex& k = (*superset)[j];
    if (!J.position(k)) outside.push_back(std::abs(f.coeff(k)));
  }
  double total = std::accumulate(outside.begin(), outside.end(), 0.0);
  // geometric extrapolation of the un-enumerated tail from the two halves
  const std::size_t h = outside.size() / 2;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < outside.size(); ++i) (i < h ? first : second) += outside[i];
  if (second > 0.0 && second < first) total += second * second / (first - second);
  return total;
}

double l2_error_split(const GroundTruth& f, const IndexSet& J, const std::vector<cplx>& z) {
  if (z.size() != J.size()) throw std::invalid_argument("l2_error_split: size mismatch");
  double inside = 0.0;
  for (std::size_t j = 0; j < J.size(); ++j) inside += std::norm(f.coeff(J[j]) - z[j]);
  const double t = truncation_error(f, J, TruncMode::L2);
  return std::sqrt(inside + t * t);
}

McEstimate monte_carlo_lq(const std::function<double(const double*)>& f,
                          const std::function<cplx(const double*)>& g, double q, std::size_t N,
                          std::uint64_t seed, const Dictionary& dict) {
  if (q < 1.0 || std::isinf(q)) throw std::invalid_argument("monte_carlo_lq: q in [1, inf)");
  if (N < 1) throw std::invalid_argument("monte_carlo_lq: N >= 1");
  constexpr int kBatches = 5;
  double sub[kBatches];
  std::size_t done = 0;
  for (int b = 0; b < kBatches; ++b) {
    const std::size_t nb = N / kBatches + (std::size_t(b) < N % kBatches ? 1 : 0);
    if (nb == 0) {
      sub[b] = 0.0;
      continue;
    }
    const SamplePoints pts = draw_samples(dict, nb, seed + std::uint64_t(b));
    double acc = 0.0;
    for (std::size_t l = 0; l < nb; ++l) {
      const double* x = pts.point(l);
      acc += std::pow(std::abs(cplx(f(x), 0.0) - g(x)), q);
    }
    sub[b] = std::pow(acc / double(nb), 1.0 / q);
    done += nb;
  }
  (void)done;
  McEstimate out;
  for (double s : sub) out.estimate += s;
  out.estimate /= kBatches;
  double var = 0.0;
  for (double s : sub) var += (s - out.estimate) * (s - out.estimate);
  out.standard_error = std::sqrt(var / (kBatches - 1)) / std::sqrt(double(kBatches));
  return out;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points, double kappa) {
  if (points.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 points");
  std::vector<double> xs, ys;
  double prev = 0.0;
  for (const auto& [n, err] : points) {
    if (n <= prev) throw std::invalid_argument("rate_fit: n must be strictly increasing");
    if (n <= 1.0 || err <= 0.0) throw std::invalid_argument("rate_fit: need n > 1, error > 0");
    prev = n;
    xs.push_back(std::log(n));
    ys.push_back(std::log(err) - kappa * std::log(std::log(n)));
  }
  const double sz = double(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / sz;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / sz;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  RateFit fit;
  fit.rho = sxy / sxx;
  const double c = my - fit.rho * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (c + fit.rho * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / sz);
  return fit;
}

}  // namespace specrec
