#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specrec/decoders.hpp"
#include "specrec/multi_index.hpp"
#include "specrec/sampling_operator.hpp"
#include "specrec/test_functions.hpp"

namespace specrec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecoderSpec {
  std::string kind = "rlasso";  // rlasso | omp | cosamp
  // rlasso: lambda = lambda_mult * sqrt(m), alpha = alpha_mult * ||A||_2
  double lambda_mult = 1.0;
  int restarts = 11;
  double alpha_mult = 1.0;
  double beta = 2.0;
  long inner_cap = 200000;
  int gap_check_every = 25;
  // omp: K = min(|J|, m, omp_cap); optional relative-decrease early stop
  long omp_cap = 20000;
  double omp_stop_rel = 0.0;
  // cosamp: sparsity = min(m/4, |J|, cosamp_cap)
  long cosamp_cap = 20000;
  int cosamp_iters = 20;
};

struct ExperimentConfig {
  int example = 1;  // 1..4
  int d = 1;
  double ex4_c = 1.0, ex4_w = 0.4;
  std::string dict;  // defaults to the example's natural dictionary
  std::vector<double> cross_s;            // search-space radii (one |J| per entry)
  std::vector<double> cross_weights;      // anisotropy exponents r_i (empty -> isotropic)
  std::string cross_weighting = "max-one";  // max-one | one-plus
  std::vector<long> m_list;
  std::vector<DecoderSpec> decoders;
  std::vector<std::uint64_t> seeds{1};
  double superset_factor = 10.0;
  // reference law error ~ C x^{ref_rho} (log x)^{ref_kappa} for plot data
  double ref_rho = -1.5;
  double ref_kappa = 8.0;
  std::size_t mc_points = 1000000;  // Monte-Carlo error sample size (example 4)
  Precision precision = Precision::F64;
};

// Parse a JSON config document; `preset` keys "fourier-table" / "chebyshev-table"
// fill decoder defaults before explicit fields override them.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct CellRecord {
  int example = 0;
  std::string dict;
  int d = 0;
  std::size_t J_size = 0;
  long m = 0;
  std::string decoder;
  std::uint64_t seed = 0;
  double l2_error = 0.0;
  double trunc_error = 0.0;
  std::size_t nnz = 0;
  long iterations = 0;
  double wall_s = 0.0;
  bool failed = false;
  std::string error_msg;
};

inline constexpr const char* kCsvHeader =
    "example,dict,d,J_size,m,decoder,seed,l2_error,trunc_error,nnz,iterations,wall_s";

GroundTruth make_ground_truth(const ExperimentConfig& cfg);
Dictionary make_dictionary(const ExperimentConfig& cfg);
IndexSet make_search_space(const ExperimentConfig& cfg, double s);

CellRecord run_cell(const ExperimentConfig& cfg, const DecoderSpec& dec, double s, long m,
                    std::uint64_t seed);

// One CSV data row per (s, m, decoder, seed) plus per-(s, m, decoder) mean
// rows (seed column = "mean"); failures become rows with nan errors.
void run_table(const ExperimentConfig& cfg, std::ostream& csv);

// TSV: column x (= m), one error column per decoder (first seed), a
// best_n_term column from the ground-truth coefficients over the first search
// space, and a reference-law column scaled through the last best_n_term point
// (omitted when only one x value is present).
void emit_plot_data(const ExperimentConfig& cfg, std::ostream& tsv);

void format_csv_row(std::ostream& os, const CellRecord& r, bool aggregate);

}  // namespace specrec
