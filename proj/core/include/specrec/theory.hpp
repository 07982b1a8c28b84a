#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specrec/sampling_operator.hpp"

namespace specrec {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Restricted isometry constant delta_n for a tall dense matrix A:
// max over all supports S with |S| = n of ||A_S^H A_S - I||_2.
// Enumeration over C(N, n) supports is guarded: N <= max_cols and
// n <= max_sparsity unless override_budget is set.
struct RipOptions {
  std::size_t max_cols = 24;
  int max_sparsity = 4;
  bool override_budget = false;
};
double rip_constant_bruteforce(const Eigen::MatrixXcd& A, int n, const RipOptions& opts = {});

// Closed-form robust null space property constants implied by delta < 1/3:
// rho = delta/(1-2 delta), tau = sqrt(1+delta)/(1-2 delta).
struct NSPConstants {
  double rho = 0.0;
  double tau = 1.0;
  double delta = 0.0;
};
NSPConstants nsp_from_rip(double delta);

// Randomized check of ||v_S|| <= rho n^{-1/2} ||v_{S^c}||_1 + tau ||A v||
// over random v and random supports of size n.
struct NspReport {
  int trials = 0;
  int violations = 0;
  // first violating witness, if any
  Eigen::VectorXcd witness_v;
  std::vector<int> witness_support;
  double witness_lhs = 0.0;
  double witness_rhs = 0.0;
};
NspReport nsp_empirical_check(const Eigen::MatrixXcd& A, int n, const NSPConstants& c, int trials,
                              std::uint64_t seed);

// Regularization rule lambda = 3 tau sqrt(n) and the sharper admissibility
// threshold (3+rho)/(1+rho) tau sqrt(n) it always clears.
struct LambdaRule {
  double lambda = 0.0;
  double threshold = 0.0;
  bool clears_threshold = false;
};
LambdaRule rlasso_lambda(double tau, double rho, double n);

// ceil(alpha B^2 n (log^2(B^2 n) log|J| + log(gamma^{-1} log(B^2 n)))),
// natural logs; requires B^2 n > 1.
long sample_complexity_upper(double B, double n, double J_size, double gamma, double alpha);

// Fourier grid variant: ceil(alpha d n log^2(n+1) log(D+1)).
long sample_complexity_fourier(double d, double n, double D, double alpha);

// Lower bound on the number of measurements any instance-optimal scheme
// needs: ceil(n log(N/4n) / (4 log(2C+3))) (same-norm) or with denominator
// 4 log(12C+7) (mixed). N <= 4n is degenerate and returns 0 with a flag.
enum class IoMode { SameNorm, Mixed };
struct IoBound {
  long m = 0;
  bool degenerate = false;
};
IoBound io_lower_bound(double n, double N, double C, IoMode mode);

// Randomized greedy family of n-subsets of {0..N-1} with pairwise
// intersections < n/2; target size ceil((N/4n)^{n/2}). May stop short of the
// target when the draw budget is exhausted (complete = false).
struct SubsetFamily {
  std::vector<std::vector<int>> sets;
  std::size_t target = 0;
  bool complete = false;
};
SubsetFamily subset_family(int N, int n, std::uint64_t seed, long draw_budget = 1000000);

}  // namespace specrec
