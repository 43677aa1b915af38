#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "manifest.hpp"
#include "typcell/errors.hpp"
#include "typcell/kernels.hpp"
#include "typcell/quadrature.hpp"
#include "validation.hpp"

#ifndef TYPCELL_VERSION
#define TYPCELL_VERSION "unknown"
#endif

namespace typcell::cli {

namespace {

struct ModelFlags {
  int dim = 2;
  double alpha = 4.0;
  double lambda = 1.0;
  std::string process = "type1";
  std::uint64_t realizations = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  double window_radius = 0.0;
  double rho0 = analytic::kRho0;
  double rho1 = 0.0;
  std::string out;
};

void add_model_flags(CLI::App *cmd, ModelFlags &f, bool with_dim_and_process) {
  if (with_dim_and_process) {
    cmd->add_option("--dim", f.dim, "Dimension")->check(CLI::IsMember({1, 2}))->capture_default_str();
    cmd->add_option("--process", f.process, "User process")
        ->check(CLI::IsMember({"type1", "type2"}))
        ->capture_default_str();
  }
  cmd->add_option("--alpha", f.alpha, "Path-loss exponent (> 2)")->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "BS density per unit length or area")->capture_default_str();
  cmd->add_option("--realizations", f.realizations, "Monte Carlo realizations")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads, 0 = all (capped by TYPCELL_THREADS)")
      ->capture_default_str();
  cmd->add_option("--window-radius", f.window_radius,
                  "Simulation window half-width or radius; 0 = 25/lambda (d=1), 20/sqrt(pi lambda) (d=2)")
      ->capture_default_str();
  cmd->add_option("--rho0", f.rho0, "Link-distance correction factor")->capture_default_str();
  cmd->add_option("--rho1", f.rho1, "Dominant-interferer correction factor; 0 = same as rho0")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Output CSV path (a manifest is written next to it); stdout if omitted");
}

mc::ExperimentConfig to_config(const ModelFlags &f) {
  mc::ExperimentConfig c;
  c.dimension = f.dim;
  c.alpha = f.alpha;
  c.lambda = f.lambda;
  c.user_process = f.process == "type2" ? UserProcess::type2 : UserProcess::type1;
  c.realizations = f.realizations;
  c.master_seed = f.seed;
  c.threads = f.threads;
  if (f.window_radius < 0.0) {
    throw ParameterError("--window-radius must be >= 0");
  }
  if (f.window_radius > 0.0) {
    c.window = SimWindow{f.dim, f.window_radius};
  }
  c.rho0 = f.rho0;
  c.rho1 = f.rho1 == 0.0 ? std::numeric_limits<double>::quiet_NaN() : f.rho1;
  return c;
}

// Every model flag with its resolved value; the window is spelled out so a
// replay does not depend on the defaulting rule.
std::vector<std::string> model_args(const ModelFlags &f, const mc::ExperimentConfig &c, bool with_dim_and_process) {
  std::vector<std::string> a;
  if (with_dim_and_process) {
    a.insert(a.end(), {"--dim", std::to_string(f.dim), "--process", f.process});
  }
  a.insert(a.end(), {"--alpha", format_number(f.alpha), "--lambda", format_number(f.lambda), "--realizations",
                     format_number(f.realizations), "--seed", format_number(f.seed), "--threads",
                     std::to_string(f.threads), "--window-radius", format_number(c.resolved_window().radius),
                     "--rho0", format_number(f.rho0), "--rho1", format_number(c.resolved_rho1())});
  return a;
}

nlohmann::json config_json(const mc::ExperimentConfig &c) {
  return {{"dimension", c.dimension},
          {"lambda", c.lambda},
          {"alpha", c.alpha},
          {"user_process", std::string(mc::process_tag(c.user_process))},
          {"realizations", c.realizations},
          {"master_seed", c.master_seed},
          {"window_radius", c.resolved_window().radius},
          {"tx_power_dbm", c.tx_power_dbm},
          {"rho0", c.rho0},
          {"rho1", c.resolved_rho1()},
          {"threads", c.threads}};
}

std::string range_text(const Range &r) {
  return format_number(r.start) + ":" + format_number(r.stop) + ":" + format_number(r.step);
}

struct Emission {
  std::string command;
  std::vector<std::string> args;
  nlohmann::json config;
  std::uint64_t seed = 0;
};

void emit(const Emission &e, const ExperimentOutput &o, const std::string &out_path, double seconds,
          std::ostream &out) {
  if (out_path.empty()) {
    out << o.table.render();
    return;
  }
  o.table.write(out_path);
  RunManifest m;
  m.command = e.command;
  m.args = e.args;
  m.args.insert(m.args.begin(), e.command);
  m.args.insert(m.args.end(), {"--out", out_path});
  m.config = e.config;
  m.master_seed = e.seed;
  m.version = TYPCELL_VERSION;
  m.simd = std::string(kernels::isa_name(kernels::active().isa));
  m.duration_s = seconds;
  m.discarded = o.discarded;
  m.output = out_path;
  m.extras = o.extras;
  write_manifest(m, manifest_path_for(out_path));
  out << "wrote " << out_path << " (" << o.table.size() << " rows)\n";
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// "pcf.csv" -> "pcf_ro0.3.csv".
std::string with_ro_suffix(const std::string &path, double ro) {
  if (path.empty()) {
    return path;
  }
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_ro" + format_number(ro) + p.extension().string())).string();
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Downlink coverage of Poisson cellular networks for typical-cell (Type I) and Crofton-cell "
               "(Type II) users: analytic forms and Monte Carlo",
               "typcell"};
  app.set_version_flag("--version", std::string(TYPCELL_VERSION));
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with one [subcommand] section; command-line flags take precedence");

  // coverage ----------------------------------------------------------------
  ModelFlags cov;
  std::string cov_method = "analytic";
  std::string cov_tau = "-10:20:1";
  auto *coverage = app.add_subcommand(
      "coverage", "Coverage probability P[SIR > tau] versus threshold (the Type I / Type II coverage figure)");
  add_model_flags(coverage, cov, true);
  coverage->add_option("--method", cov_method, "analytic | app1-analytic | mc | app1 | app2")
      ->check(CLI::IsMember({"analytic", "app1-analytic", "mc", "app1", "app2"}))
      ->capture_default_str();
  coverage->add_option("--tau-db", cov_tau, "Threshold grid start:stop:step in dB")->capture_default_str();

  // linkdist ----------------------------------------------------------------
  ModelFlags ld;
  ld.realizations = 100'000;
  std::string ld_grid;
  auto *linkdist = app.add_subcommand(
      "linkdist", "Serving and dominant-interferer distance CDFs of the Type I user (link-distance figure)");
  add_model_flags(linkdist, ld, false);
  linkdist->add_option("--grid", ld_grid, "Distance grid start:stop:step; default 0:3/sqrt(lambda):0.01/sqrt(lambda)");

  // pcf ---------------------------------------------------------------------
  ModelFlags pf;
  std::vector<double> pf_ro = {0.3, 0.6};
  double pf_halfwidth = 0.0;
  std::string pf_bins;
  auto *pcf = app.add_subcommand(
      "pcf", "Pair correlation of the interferers seen from the Type I user given R0 (pcf figure)");
  add_model_flags(pcf, pf, false);
  pcf->add_option("--ro", pf_ro, "Conditioning link distance (repeatable)")->capture_default_str();
  pcf->add_option("--ro-halfwidth", pf_halfwidth, "Conditioning half-width; 0 = 0.025/sqrt(lambda)")
      ->capture_default_str();
  pcf->add_option("--bins", pf_bins, "Bin edges start:stop:step; default 0:4:0.05 scaled by 1/sqrt(lambda)");

  // powercdf ----------------------------------------------------------------
  ModelFlags pw;
  pw.lambda = 1e-5;
  pw.realizations = 100'000;
  double pw_tx = 30.0;
  std::size_t pw_points = 200;
  auto *powercdf = app.add_subcommand(
      "powercdf", "Received signal and interference power CDFs for Type I and Type II users (power figure)");
  add_model_flags(powercdf, pw, false);
  powercdf->add_option("--tx-dbm", pw_tx, "Transmit power in dBm")->capture_default_str();
  powercdf->add_option("--grid-points", pw_points, "Points on the shared dBm grid")->capture_default_str();

  // validate ----------------------------------------------------------------
  bool val_full = false;
  bool val_quick = false;
  std::uint64_t val_seed = 1;
  std::size_t val_threads = 0;
  std::vector<int> val_only;
  double val_rho0 = 0.0;
  auto *validate = app.add_subcommand("validate", "Run the acceptance criteria and report pass/fail");
  auto *quick_flag = validate->add_flag("--quick", val_quick, "10^4 realizations (default)");
  validate->add_flag("--full", val_full, "10^6 realizations, stated tolerances")->excludes(quick_flag);
  validate->add_option("--seed", val_seed, "Master seed")->capture_default_str();
  validate->add_option("--threads", val_threads, "Worker threads, 0 = all")->capture_default_str();
  validate->add_option("--only", val_only, "Criterion ids to run")->check(CLI::Range(1, kCriterionCount));
  validate->add_option("--rho0", val_rho0, "Override the link-distance correction factor (fault injection)");

  // replay ------------------------------------------------------------------
  std::string replay_manifest;
  std::string replay_out;
  auto *replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_manifest, "Manifest JSON written next to a CSV")->required();
  replay->add_option("--out", replay_out, "Write to this path instead of the recorded one");

  std::vector<const char *> argv;
  for (const auto &a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();

    if (coverage->parsed()) {
      const auto method = parse_method(cov_method).value();
      const Range tau = parse_range(cov_tau);
      mc::ExperimentConfig c = to_config(cov);
      if ((method == CoverageMethod::app1 || method == CoverageMethod::app2 ||
           method == CoverageMethod::app1_analytic) &&
          (c.dimension != 2 || c.user_process != UserProcess::type1)) {
        throw ParameterError("--method " + cov_method + " requires --dim 2 --process type1");
      }
      c.validate();
      const auto grid = tau.values();
      const ExperimentOutput o = coverage_experiment(c, method, grid);
      Emission e{"coverage", model_args(cov, c, true), config_json(c), c.master_seed};
      e.args.insert(e.args.end(), {"--method", cov_method, "--tau-db", range_text(tau)});
      e.config["method"] = cov_method;
      e.config["tau_db"] = range_text(tau);
      emit(e, o, cov.out, elapsed_since(t0), out);
      return kExitOk;
    }

    if (linkdist->parsed()) {
      mc::ExperimentConfig c = to_config(ld);
      c.validate();
      const double scale = 1.0 / std::sqrt(c.lambda);
      const Range grid = ld_grid.empty() ? Range{0.0, 3.0 * scale, 0.01 * scale} : parse_range(ld_grid);
      const ExperimentOutput o = linkdist_experiment(c, grid.values());
      Emission e{"linkdist", model_args(ld, c, false), config_json(c), c.master_seed};
      e.args.insert(e.args.end(), {"--grid", range_text(grid)});
      e.config["grid"] = range_text(grid);
      emit(e, o, ld.out, elapsed_since(t0), out);
      return kExitOk;
    }

    if (pcf->parsed()) {
      mc::ExperimentConfig c = to_config(pf);
      c.validate();
      const double scale = 1.0 / std::sqrt(c.lambda);
      const Range bins = pf_bins.empty() ? Range{0.0, 4.0 * scale, 0.05 * scale} : parse_range(pf_bins);
      const double halfwidth = pf_halfwidth > 0.0 ? pf_halfwidth : mc::default_ro_halfwidth(c.lambda);
      if (pf_ro.empty()) {
        throw ParameterError("--ro needs at least one value");
      }
      for (const double ro : pf_ro) {
        const auto t_ro = std::chrono::steady_clock::now();
        const ExperimentOutput o = pcf_experiment(c, ro, halfwidth, bins.values());
        Emission e{"pcf", model_args(pf, c, false), config_json(c), c.master_seed};
        e.args.insert(e.args.end(), {"--ro", format_number(ro), "--ro-halfwidth", format_number(halfwidth),
                                     "--bins", range_text(bins)});
        e.config["ro"] = ro;
        e.config["ro_halfwidth"] = halfwidth;
        e.config["bins"] = range_text(bins);
        const std::string path = with_ro_suffix(pf.out, ro);
        emit(e, o, path, elapsed_since(t_ro), out);
        if (!path.empty()) {
          // The manifest replays into the same file: record the base path.
          RunManifest m = read_manifest(manifest_path_for(path));
          m.args.back() = pf.out;
          write_manifest(m, manifest_path_for(path));
        }
      }
      return kExitOk;
    }

    if (powercdf->parsed()) {
      mc::ExperimentConfig c = to_config(pw);
      c.tx_power_dbm = pw_tx;
      c.validate();
      const ExperimentOutput o = powercdf_experiment(c, pw_points);
      Emission e{"powercdf", model_args(pw, c, false), config_json(c), c.master_seed};
      e.args.insert(e.args.end(), {"--tx-dbm", format_number(pw_tx), "--grid-points", std::to_string(pw_points)});
      e.config["grid_points"] = pw_points;
      emit(e, o, pw.out, elapsed_since(t0), out);
      return kExitOk;
    }

    if (validate->parsed()) {
      ValidationOptions opt;
      opt.scale = val_full ? ValidationScale::full : ValidationScale::quick;
      opt.seed = val_seed;
      opt.threads = val_threads;
      opt.only = val_only;
      if (val_rho0 != 0.0) {
        opt.rho0 = val_rho0;
      }
      opt.on_result = [&out](const CriterionResult &r) { out << format_result(r) << '\n' << std::flush; };
      const auto results = run_validation(opt);
      std::size_t failed = 0;
      std::string failed_ids;
      for (const auto &r : results) {
        if (!r.passed) {
          ++failed;
          failed_ids += " " + std::to_string(r.id);
        }
      }
      out << results.size() - failed << "/" << results.size() << " criteria passed";
      if (failed > 0) {
        out << "; failed:" << failed_ids;
      }
      out << " (" << (val_full ? "full" : "quick") << " scale, " << elapsed_since(t0) << " s)\n";
      return failed == 0 ? kExitOk : kExitValidationFailed;
    }

    if (replay->parsed()) {
      const RunManifest m = read_manifest(replay_manifest);
      std::vector<std::string> again = {args.front()};
      again.insert(again.end(), m.args.begin(), m.args.end());
      if (!replay_out.empty()) {
        const auto it = std::find(again.begin(), again.end(), "--out");
        if (it == again.end() || it + 1 == again.end()) {
          throw ParameterError("manifest has no --out to replace");
        }
        *(it + 1) = replay_out;
      }
      return run_cli(std::move(again), out, err);
    }
  } catch (const ParameterError &e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const quad::QuadratureError &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

} // namespace typcell::cli
