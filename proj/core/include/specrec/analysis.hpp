#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "specrec/dictionary.hpp"
#include "specrec/multi_index.hpp"
#include "specrec/test_functions.hpp"

namespace specrec {

// A finite coefficient sequence with optional certified bounds on the part
// of the (infinite) sequence that lies beyond it.
struct CoeffSequence {
  std::vector<cplx> values;
  double tail_l1 = 0.0;
  double tail_l2 = 0.0;
};

// l_p norm of everything past the n largest magnitudes (ties broken by
// ordinal). Finite p folds in the matching certified tail bound (p=1 -> l1,
// p=2 -> l2); p = infinity returns the (n+1)-st largest magnitude.
double best_n_term(const CoeffSequence& v, std::size_t n, double p);

// l_theta norm of the sequence plus a certified tail bound (upper estimate).
double wiener_norm(const CoeffSequence& v, double theta);

enum class TruncMode { L2, LinfUpper };

// Distance from f to span{atoms in J}.
//  - L2: exact Parseval complement sqrt(norm_sq - sum_{k in J} |coeff|^2);
//    no superset needed since the exact norm is known.
//  - LinfUpper: l1 upper bound sum_{k not in J} |coeff| over the superset
//    plus a geometric tail extrapolation; requires superset containing J.
double truncation_error(const GroundTruth& f, const IndexSet& J, TruncMode mode,
                        const IndexSet* superset = nullptr);

// Exact L2 error of reconstructed coefficients z (aligned with J):
// sqrt(sum_{k in J} |coeff(k) - z_k|^2 + truncation_error(L2)^2)
double l2_error_split(const GroundTruth& f, const IndexSet& J, const std::vector<cplx>& z);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// (E_mu |f - g|^q)^{1/q} under the dictionary's sampling measure, estimated
// as the average of 5 batch sub-estimates with their empirical standard error.
McEstimate monte_carlo_lq(const std::function<double(const double*)>& f,
                          const std::function<cplx(const double*)>& g, double q, std::size_t N,
                          std::uint64_t seed, const Dictionary& dict);

struct RateFit {
  double rho = 0.0;       // fitted exponent in error ~ C n^rho (log n)^kappa
  double residual = 0.0;  // RMS of log-space fit residuals
};

// OLS of log(error) - kappa*log(log n) against log(n); needs >= 3 points
// with strictly increasing n > 1 and positive errors.
RateFit rate_fit(const std::vector<std::pair<double, double>>& points, double kappa);

}  // namespace specrec
