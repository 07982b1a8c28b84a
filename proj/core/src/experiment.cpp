#include "specrec/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "specrec/analysis.hpp"

namespace specrec {

namespace {

using nlohmann::json;

void apply_preset(DecoderSpec& dec, const std::string& preset) {
  if (preset.empty()) return;
  if (preset == "fourier-table") {
    dec.beta = 2.0;
    dec.alpha_mult = 1.0;
    dec.restarts = 11;
  } else if (preset == "chebyshev-table") {
    dec.beta = 3.0;
    dec.alpha_mult = 0.3;
    dec.restarts = 11;
  } else {
    throw ConfigError("unknown preset: " + preset);
  }
}

DecoderSpec parse_decoder(const json& j, const std::string& global_preset) {
  DecoderSpec dec;
  apply_preset(dec, j.value("preset", global_preset));
  dec.kind = j.value("kind", dec.kind);
  if (dec.kind != "rlasso" && dec.kind != "omp" && dec.kind != "cosamp")
    throw ConfigError("unknown decoder kind: " + dec.kind);
  dec.lambda_mult = j.value("lambda_mult", dec.lambda_mult);
  dec.restarts = j.value("restarts", dec.restarts);
  dec.alpha_mult = j.value("alpha_mult", dec.alpha_mult);
  dec.beta = j.value("beta", dec.beta);
  dec.inner_cap = j.value("inner_cap", dec.inner_cap);
  dec.gap_check_every = j.value("gap_check_every", dec.gap_check_every);
  dec.omp_cap = j.value("omp_cap", dec.omp_cap);
  dec.omp_stop_rel = j.value("omp_stop_rel", dec.omp_stop_rel);
  dec.cosamp_cap = j.value("cosamp_cap", dec.cosamp_cap);
  dec.cosamp_iters = j.value("cosamp_iters", dec.cosamp_iters);
  return dec;
}

template <typename T>
std::vector<T> scalar_or_list(const json& j) {
  std::vector<T> out;
  if (j.is_array())
    for (const auto& e : j) out.push_back(e.get<T>());
  else
    out.push_back(j.get<T>());
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::function<cplx(const double*)> make_synthesizer(const Dictionary& dict, const IndexSet& J,
                                                    const VecC& z) {
  std::vector<std::pair<MultiIndex, cplx>> terms;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (z[j] != cplx(0, 0)) terms.emplace_back(J[std::size_t(j)], z[j]);
  const DictKind kind = dict.kind;
  const int d = dict.dim;
  return [terms, kind, d](const double* x) {
    Dictionary plain{kind, d, std::nullopt};
    cplx acc(0, 0);
    for (const auto& [k, c] : terms) {
      cplx v(1, 0);
      for (int i = 0; i < d; ++i)
        v *= (kind == DictKind::LegendrePreconditioned) ? cplx(legendre_orthonormal(k[i], x[i]), 0)
                                                        : plain.atom_factor(k[i], x[i]);
      acc += c * v;
    }
    return acc;
  };
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.example = j.value("example", cfg.example);
    if (cfg.example < 1 || cfg.example > 4) throw ConfigError("example must be 1..4");
    cfg.d = j.value("d", cfg.example == 2 ? 7 : cfg.d);
    cfg.ex4_c = j.value("ex4_c", cfg.ex4_c);
    cfg.ex4_w = j.value("ex4_w", cfg.ex4_w);
    cfg.dict = j.value("dict", cfg.dict);
    if (j.contains("cross_s")) cfg.cross_s = scalar_or_list<double>(j.at("cross_s"));
    if (j.contains("cross_weights"))
      cfg.cross_weights = j.at("cross_weights").get<std::vector<double>>();
    cfg.cross_weighting = j.value("cross_weighting", cfg.cross_weighting);
    if (cfg.cross_weighting != "max-one" && cfg.cross_weighting != "one-plus")
      throw ConfigError("cross_weighting must be max-one or one-plus");
    if (j.contains("m")) cfg.m_list = scalar_or_list<long>(j.at("m"));
    const std::string preset = j.value("preset", std::string());
    if (j.contains("decoders"))
      for (const auto& dj : j.at("decoders")) cfg.decoders.push_back(parse_decoder(dj, preset));
    if (j.contains("seeds")) cfg.seeds = scalar_or_list<std::uint64_t>(j.at("seeds"));
    cfg.superset_factor = j.value("superset_factor", cfg.superset_factor);
    cfg.ref_rho = j.value("ref_rho", cfg.ref_rho);
    cfg.ref_kappa = j.value("ref_kappa", cfg.ref_kappa);
    cfg.mc_points = j.value("mc_points", cfg.mc_points);
    const std::string prec = j.value("precision", std::string("f64"));
    if (prec == "f64")
      cfg.precision = Precision::F64;
    else if (prec == "f32")
      cfg.precision = Precision::F32;
    else
      throw ConfigError("precision must be f32 or f64");
    if (cfg.cross_s.empty()) throw ConfigError("cross_s is required");
    if (cfg.decoders.empty()) throw ConfigError("at least one decoder is required");
    if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
    if (!cfg.cross_weights.empty() && int(cfg.cross_weights.size()) != cfg.d)
      throw ConfigError("cross_weights must have d entries");
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GroundTruth make_ground_truth(const ExperimentConfig& cfg) {
  switch (cfg.example) {
    case 1: return example1(cfg.d);
    case 2:
      if (cfg.d != 7) throw ConfigError("example 2 is fixed at d = 7");
      return example2();
    case 3: return example3(cfg.d);
    default: return example4(cfg.d, cfg.ex4_c, cfg.ex4_w, /*normalized=*/true);
  }
}

Dictionary make_dictionary(const ExperimentConfig& cfg) {
  std::string name = cfg.dict;
  if (name.empty()) name = (cfg.example <= 2) ? "fourier" : "chebyshev";
  if (name == "fourier") {
    if (cfg.example > 2) throw ConfigError("examples 3-4 live on [-1,1]^d, not the torus");
    return make_fourier(cfg.d);
  }
  if (cfg.example <= 2) throw ConfigError("examples 1-2 are periodic; use the fourier dictionary");
  if (name == "chebyshev") return make_chebyshev(cfg.d);
  if (name == "legendre") return make_legendre_preconditioned(cfg.d);
  throw ConfigError("unknown dict: " + name);
}

IndexSet make_search_space(const ExperimentConfig& cfg, double s) {
  const bool signed_freqs = (cfg.example <= 2);
  const CrossWeight w =
      cfg.cross_weighting == "one-plus" ? CrossWeight::OnePlus : CrossWeight::MaxOne;
  const std::vector<double>* r = cfg.cross_weights.empty() ? nullptr : &cfg.cross_weights;
  return hyperbolic_cross(s, cfg.d, r, signed_freqs, w);
}

CellRecord run_cell(const ExperimentConfig& cfg, const DecoderSpec& dec, double s, long m,
                    std::uint64_t seed) {
  if (m < 1) throw ConfigError("m must be positive");
  const GroundTruth gt = make_ground_truth(cfg);
  const Dictionary dict = make_dictionary(cfg);
  const IndexSet J = make_search_space(cfg, s);
  const SamplePoints X = draw_samples(dict, std::size_t(m), seed);

  SamplingOperator A(dict, J, X, cfg.precision);
  VecC y(m);
  const double inv_sqrt_m = 1.0 / std::sqrt(double(m));
  for (long l = 0; l < m; ++l)
    y[l] = inv_sqrt_m * dict.precondition_weight(X.point(std::size_t(l))) *
           gt.eval(X.point(std::size_t(l)));

  DecoderConfig dconf;
  if (dec.kind == "rlasso") {
    const double norm_a = A.spectral_norm(200, 1e-6, seed);
    RLassoConfig rc;
    rc.lambda = dec.lambda_mult * std::sqrt(double(m));
    rc.restarts = dec.restarts;
    rc.alpha = dec.alpha_mult * norm_a;
    rc.beta = dec.beta;
    rc.inner_cap = dec.inner_cap;
    rc.gap_check_every = dec.gap_check_every;
    rc.operator_norm = norm_a;
    dconf = rc;
  } else if (dec.kind == "omp") {
    OmpConfig oc;
    oc.steps = std::min<long>({long(J.size()), m, dec.omp_cap});
    oc.stop_rel_decrease = dec.omp_stop_rel;
    dconf = oc;
  } else {
    CosampConfig cc;
    cc.sparsity = std::max<long>(1, std::min<long>({m / 4, long(J.size()), dec.cosamp_cap}));
    cc.iterations = dec.cosamp_iters;
    dconf = cc;
  }

  const DecoderResult res = run_decoder(A, y, dconf);

  CellRecord rec;
  rec.example = cfg.example;
  rec.dict = dict.kind_name();
  rec.d = cfg.d;
  rec.J_size = J.size();
  rec.m = m;
  rec.decoder = dec.kind;
  rec.seed = seed;
  rec.nnz = res.support.size();
  rec.iterations = res.iterations;
  rec.wall_s = res.wall_s;

  const bool coeff_mode = gt.has_coeffs && dict.kind == gt.dict;
  if (coeff_mode) {
    std::vector<cplx> z(J.size());
    for (std::size_t j = 0; j < J.size(); ++j) z[j] = res.coefficients[Eigen::Index(j)];
    rec.l2_error = l2_error_split(gt, J, z);
    rec.trunc_error = truncation_error(gt, J, TruncMode::L2);
  } else {
    const auto synth = make_synthesizer(dict, J, res.coefficients);
    rec.l2_error = monte_carlo_lq(gt.eval, synth, 2.0, cfg.mc_points, seed + 0x51ull, dict).estimate;
    rec.trunc_error = std::nan("");
  }
  return rec;
}

void format_csv_row(std::ostream& os, const CellRecord& r, bool aggregate) {
  os << r.example << ',' << r.dict << ',' << r.d << ',' << r.J_size << ',' << r.m << ','
     << r.decoder << ',';
  if (aggregate)
    os << "mean";
  else
    os << r.seed;
  os << ',' << fmt_double(r.l2_error) << ',' << fmt_double(r.trunc_error) << ',' << r.nnz << ','
     << r.iterations << ',' << fmt_double(r.wall_s) << '\n';
}

void run_table(const ExperimentConfig& cfg, std::ostream& csv) {
  csv << kCsvHeader << '\n';
  std::vector<CellRecord> records;
  for (double s : cfg.cross_s)
    for (long m : cfg.m_list)
      for (const DecoderSpec& dec : cfg.decoders)
        for (std::uint64_t seed : cfg.seeds) {
          CellRecord rec;
          try {
            rec = run_cell(cfg, dec, s, m, seed);
          } catch (const std::exception& e) {
            rec.example = cfg.example;
            rec.d = cfg.d;
            rec.m = m;
            rec.decoder = dec.kind;
            rec.seed = seed;
            rec.l2_error = std::nan("");
            rec.trunc_error = std::nan("");
            rec.failed = true;
            rec.error_msg = e.what();
            csv << "# cell failed (m=" << m << ", decoder=" << dec.kind << ", seed=" << seed
                << "): " << rec.error_msg << '\n';
          }
          if (!rec.failed) format_csv_row(csv, rec, false);
          records.push_back(std::move(rec));
        }
  // aggregate rows: mean over seeds per (s, m, decoder), in encounter order
  std::size_t group = cfg.seeds.size();
  for (std::size_t base = 0; base + group <= records.size(); base += group) {
    CellRecord agg = records[base];
    int good = agg.failed ? 0 : 1;
    for (std::size_t i = 1; i < group; ++i) {
      const CellRecord& r = records[base + i];
      if (r.failed) continue;
      if (good == 0) agg = r;
      else {
        agg.l2_error += r.l2_error;
        agg.wall_s += r.wall_s;
        agg.nnz += r.nnz;
        agg.iterations += r.iterations;
      }
      ++good;
    }
    if (good == 0) continue;
    agg.l2_error /= good;
    agg.wall_s /= good;
    agg.nnz = std::size_t(double(agg.nnz) / good + 0.5);
    agg.iterations = long(double(agg.iterations) / good + 0.5);
    format_csv_row(csv, agg, true);
  }
}

void emit_plot_data(const ExperimentConfig& cfg, std::ostream& tsv) {
  if (cfg.m_list.empty()) throw ConfigError("plot data needs a non-empty m list");
  const GroundTruth gt = make_ground_truth(cfg);
  const double s = cfg.cross_s.front();
  const std::uint64_t seed = cfg.seeds.front();

  const bool benchmark = gt.has_coeffs;
  tsv << "x";
  for (const auto& dec : cfg.decoders) tsv << '\t' << dec.kind;
  if (benchmark) tsv << "\tbest_n_term";
  const bool ref = benchmark && cfg.m_list.size() > 1;
  if (ref) tsv << "\treference";
  tsv << '\n';

  CoeffSequence seq;
  if (benchmark) {
    const IndexSet J = make_search_space(cfg, s);
    seq.values.reserve(J.size());
    for (std::size_t j = 0; j < J.size(); ++j) seq.values.push_back(gt.coeff(J[j]));
  }
  std::vector<double> bench(cfg.m_list.size(), 0.0);
  if (benchmark)
    for (std::size_t i = 0; i < cfg.m_list.size(); ++i)
      bench[i] = best_n_term(seq, std::size_t(cfg.m_list[i]), 2.0);
  double ref_scale = 1.0;
  if (ref) {
    const double x = double(cfg.m_list.back());
    const double law = std::pow(x, cfg.ref_rho) * std::pow(std::log(x), cfg.ref_kappa);
    ref_scale = bench.back() > 0.0 && law > 0.0 ? bench.back() / law : 1.0;
  }

  for (std::size_t i = 0; i < cfg.m_list.size(); ++i) {
    const long m = cfg.m_list[i];
    tsv << m;
    for (const auto& dec : cfg.decoders) {
      const CellRecord rec = run_cell(cfg, dec, s, m, seed);
      tsv << '\t' << fmt_double(rec.l2_error);
    }
    if (benchmark) tsv << '\t' << fmt_double(bench[i]);
    if (ref)
      tsv << '\t'
          << fmt_double(ref_scale * std::pow(double(m), cfg.ref_rho) *
                        std::pow(std::log(double(m)), cfg.ref_kappa));
    tsv << '\n';
  }
}

}  // namespace specrec
