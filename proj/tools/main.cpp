// Command-line front end: table runs, plot data, bound calculators, selftest.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "specrec/analysis.hpp"
#include "specrec/decoders.hpp"
#include "specrec/experiment.hpp"
#include "specrec/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

using nlohmann::json;
using namespace specrec;

std::ofstream open_out(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / name);
  if (!f) throw ConfigError("cannot open output file " + name + " under " + out_dir);
  return f;
}

void apply_overrides(ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::string& precision) {
  if (seed) cfg.seeds = {*seed};
  if (precision == "f32")
    cfg.precision = Precision::F32;
  else if (precision == "f64")
    cfg.precision = Precision::F64;
  else if (!precision.empty())
    throw ConfigError("precision must be f32 or f64");
}

json bounds_from_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json req;
  try {
    req = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  json out;
  try {
    if (req.contains("sample_complexity")) {
      const json& q = req.at("sample_complexity");
      out["sample_complexity"] = {
          {"inputs", q},
          {"m", sample_complexity_upper(q.at("B"), q.at("n"), q.at("J"), q.at("gamma"),
                                        q.value("alpha", 1.0))}};
    }
    if (req.contains("sample_complexity_fourier")) {
      const json& q = req.at("sample_complexity_fourier");
      out["sample_complexity_fourier"] = {
          {"inputs", q},
          {"m", sample_complexity_fourier(q.at("d"), q.at("n"), q.at("D"), q.value("alpha", 1.0))}};
    }
    if (req.contains("io_lower_bound")) {
      const json& q = req.at("io_lower_bound");
      const std::string mode = q.value("mode", "same-norm");
      if (mode != "same-norm" && mode != "mixed")
        throw ConfigError("io_lower_bound mode must be same-norm or mixed");
      const IoBound b = io_lower_bound(q.at("n"), q.at("N"), q.at("C"),
                                       mode == "mixed" ? IoMode::Mixed : IoMode::SameNorm);
      out["io_lower_bound"] = {{"inputs", q}, {"m", b.m}, {"degenerate", b.degenerate}};
    }
    if (req.contains("nsp_from_rip")) {
      const json& q = req.at("nsp_from_rip");
      const NSPConstants c = nsp_from_rip(q.at("delta"));
      out["nsp_from_rip"] = {{"inputs", q}, {"rho", c.rho}, {"tau", c.tau}};
    }
    if (req.contains("rlasso_lambda")) {
      const json& q = req.at("rlasso_lambda");
      const LambdaRule r = rlasso_lambda(q.at("tau"), q.at("rho"), q.at("n"));
      out["rlasso_lambda"] = {{"inputs", q},
                              {"lambda", r.lambda},
                              {"threshold", r.threshold},
                              {"clears_threshold", r.clears_threshold}};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  if (out.empty()) throw ConfigError("bounds config names no calculators");
  return out;
}

int selftest() {
  // quick smoke checks of the main numeric paths
  const auto gt = example1(1);
  if (std::abs(std::abs(gt.coeff({0})) - std::pow(5.0, 0.25) / std::sqrt(3.0)) > 1e-12) {
    std::cerr << "selftest: example1 base coefficient mismatch\n";
    return kExitNumerical;
  }
  const Dictionary dict = make_fourier(1);
  const IndexSet J = full_cube(8, 1, true);
  const SamplePoints X = draw_samples(dict, 64, 7);
  SamplingOperator A(dict, J, X);
  VecC z = VecC::Zero(long(J.size()));
  z[3] = cplx(1.0, -0.5);
  const VecC y = A.apply(z);
  RLassoConfig rc;
  rc.lambda = 8.0;
  const DecoderResult res = restarted_pdhgm(A, y, rc);
  if ((res.coefficients - z).norm() > 1e-3) {
    std::cerr << "selftest: one-sparse recovery failed, error "
              << (res.coefficients - z).norm() << "\n";
    return kExitNumerical;
  }
  const IoBound b = io_lower_bound(10, 4000, 1.0, IoMode::SameNorm);
  if (b.m != 8) {
    std::cerr << "selftest: io_lower_bound mismatch\n";
    return kExitNumerical;
  }
  std::cout << "selftest: ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();  // allow the global options below after the subcommand name

  std::string config_path, out_dir, precision;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "override the config's seed list with one seed");
  app.add_option("--out", out_dir, "output directory (stdout when omitted)");
  app.add_option("--threads", threads, "worker threads (1 supported)");
  app.add_option("--precision", precision, "override precision: f32 or f64");

  auto* cmd_run = app.add_subcommand("run", "run the experiment table, emit CSV");
  auto* cmd_plot = app.add_subcommand("plot-data", "emit per-decoder error series as TSV");
  auto* cmd_bounds = app.add_subcommand("bounds", "evaluate bound calculators, emit JSON");
  auto* cmd_selftest = app.add_subcommand("selftest", "quick smoke checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cmd_selftest->parsed()) return selftest();
    if (config_path.empty()) throw ConfigError("--config is required");

    if (cmd_bounds->parsed()) {
      const json out = bounds_from_config(config_path);
      if (out_dir.empty())
        std::cout << out.dump(2) << '\n';
      else
        open_out(out_dir, "bounds.json") << out.dump(2) << '\n';
      return kExitOk;
    }

    ExperimentConfig cfg = load_config(config_path);
    apply_overrides(cfg, seed, precision);
    if (cmd_run->parsed()) {
      if (out_dir.empty())
        run_table(cfg, std::cout);
      else {
        auto f = open_out(out_dir, "table.csv");
        run_table(cfg, f);
      }
      return kExitOk;
    }
    if (cmd_plot->parsed()) {
      if (out_dir.empty())
        emit_plot_data(cfg, std::cout);
      else {
        auto f = open_out(out_dir, "plot.tsv");
        emit_plot_data(cfg, f);
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
