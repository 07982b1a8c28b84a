#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specrec/least_squares.hpp"
#include "specrec/multi_index.hpp"
#include "specrec/sampling_operator.hpp"

namespace specrec {

struct DivergenceError : std::runtime_error {
  int iteration;
  DivergenceError(const std::string& what, int it) : std::runtime_error(what), iteration(it) {}
};

struct RLassoConfig {
  double lambda = 1.0;
  int restarts = 11;
  double alpha = 1.0;  // sharpness constant (experiments use a multiple of ||A||_2)
  double beta = 2.0;   // sharpness exponent
  long inner_cap = 200000;
  int gap_check_every = 25;
  std::optional<double> operator_norm;  // estimated if absent
};

struct OmpConfig {
  long steps = 1;
  // optional early stop: quit when the relative residual decrease of a step
  // falls below this value (0 disables; the contract default is the full K).
  double stop_rel_decrease = 0.0;
};

struct CosampConfig {
  long sparsity = 1;
  int iterations = 20;
  double lsq_tol = 1e-8;
  int lsq_iters = 200;
};

using DecoderConfig = std::variant<RLassoConfig, OmpConfig, CosampConfig>;

struct StepRecord {
  int index = 0;
  double objective = 0.0;
  double residual = 0.0;
  long inner_iterations = 0;
};

struct DecoderResult {
  VecC coefficients;
  std::vector<std::size_t> support;
  std::vector<StepRecord> trace;
  double wall_s = 0.0;
  long iterations = 0;
  bool budget_exhausted = false;
  bool warning = false;
  std::string decoder_name;
};

// Appends one line per trace record: name,index,objective,residual,inner_iterations.
void write_diagnostics(std::ostream& os, const DecoderResult& result);

cplx soft_shrink(cplx x, double t);
void dual_project(VecC& q);

struct PdhgmOut {
  VecC z_avg, q_avg;
  long iterations = 0;
  bool stopped_early = false;
};

// One PDHGM block: primal softshrink step, over-relaxed dual step with shift
// sigma*y, dual ball projection, ergodic averages. If gap_target is set, the
// estimated optimality gap of the averaged iterates is checked every
// `check_every` iterations and the loop exits once it drops below the target.
PdhgmOut pdhgm(const LinearOperator& A, const VecC& y, double lambda, double tau, double sigma,
               long K, const VecC& z0, const VecC& q0,
               std::optional<double> gap_target = std::nullopt, int check_every = 25);

double rlasso_objective(const LinearOperator& A, const VecC& y, double lambda, const VecC& z);

DecoderResult restarted_pdhgm(const LinearOperator& A, const VecC& y, const RLassoConfig& cfg);
DecoderResult omp(const LinearOperator& A, const VecC& y, const OmpConfig& cfg);
DecoderResult cosamp(const LinearOperator& A, const VecC& y, const CosampConfig& cfg);

DecoderResult run_decoder(const LinearOperator& A, const VecC& y, const DecoderConfig& cfg);

// Forms y = m^{-1/2} w(x^l) f(x^l), decodes, and returns the coefficients
// together with a synthesizer over the ORIGINAL (unpreconditioned) basis.
struct DecodeOutput {
  DecoderResult result;
  std::function<cplx(const double*)> synthesize;
};

DecodeOutput decode(const Dictionary& dict, const IndexSet& J, const SamplePoints& X,
                    const std::vector<double>& raw_values, const DecoderConfig& cfg,
                    Precision precision = Precision::F64);

}  // namespace specrec
