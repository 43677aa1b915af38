#include "experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "typcell/analytic.hpp"
#include "typcell/errors.hpp"

namespace typcell::cli {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParameterError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

analytic::ModelParams params_of(const mc::ExperimentConfig &c) {
  return analytic::ModelParams::make(c.alpha, c.lambda, c.dimension, c.rho0, c.rho1);
}

std::vector<std::string> coverage_cells(double tau_db, double estimate, const std::string &ci_low,
                                        const std::string &ci_high, const std::string &n, CoverageMethod method,
                                        const mc::ExperimentConfig &c) {
  return {format_number(tau_db), format_number(estimate), ci_low,
          ci_high,               n,                       std::string(method_name(method)),
          std::string(mc::process_tag(c.user_process)),   std::to_string(c.dimension),
          format_number(c.alpha)};
}

} // namespace

std::string_view method_name(CoverageMethod m) {
  switch (m) {
  case CoverageMethod::analytic:
    return "analytic";
  case CoverageMethod::app1_analytic:
    return "app1-analytic";
  case CoverageMethod::mc:
    return "mc";
  case CoverageMethod::app1:
    return "app1";
  case CoverageMethod::app2:
    return "app2";
  }
  return "unknown";
}

std::optional<CoverageMethod> parse_method(std::string_view text) {
  for (const auto m : {CoverageMethod::analytic, CoverageMethod::app1_analytic, CoverageMethod::mc,
                       CoverageMethod::app1, CoverageMethod::app2}) {
    if (text == method_name(m)) {
      return m;
    }
  }
  return std::nullopt;
}

std::vector<double> Range::values() const {
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Round away accumulated binary noise so 0.05 * 3 prints as 0.15.
    out[k] = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
  }
  return out;
}

Range parse_range(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
    throw ParameterError("range must be start:stop:step, got '" + std::string(text) + "'");
  }
  Range r;
  r.start = parse_double(text.substr(0, first), "range start");
  r.stop = parse_double(text.substr(first + 1, second - first - 1), "range stop");
  r.step = parse_double(text.substr(second + 1), "range step");
  if (!(r.step > 0.0)) {
    throw ParameterError("range step must be > 0");
  }
  if (r.start > r.stop) {
    throw ParameterError("range start must not exceed stop");
  }
  if ((r.stop - r.start) / r.step > 1e6) {
    throw ParameterError("range has too many points");
  }
  return r;
}

ExperimentOutput coverage_experiment(const mc::ExperimentConfig &config, CoverageMethod method,
                                     std::span<const double> tau_db) {
  ExperimentOutput out{CsvTable({"tau_db", "estimate", "ci_low", "ci_high", "n", "method", "process", "dim", "alpha"})};
  if (method == CoverageMethod::analytic || method == CoverageMethod::app1_analytic) {
    const auto params = params_of(config);
    const bool type1 = config.user_process == UserProcess::type1;
    if (method == CoverageMethod::app1_analytic && (!type1 || config.dimension != 2)) {
      throw ParameterError("--method app1-analytic requires --process type1 --dim 2");
    }
    for (const double t_db : tau_db) {
      const double tau = db_to_linear(t_db);
      double value = 0.0;
      if (method == CoverageMethod::app1_analytic) {
        value = analytic::coverage_type1_app1_2d(tau, params);
      } else if (!type1) {
        value = analytic::coverage_type2(tau, params, config.dimension);
      } else if (config.dimension == 1) {
        value = analytic::coverage_type1_1d(tau, params);
      } else {
        value = analytic::coverage_type1_2d(tau, params);
      }
      out.table.row(coverage_cells(t_db, value, "", "", "", method, config));
    }
    return out;
  }

  mc::ExperimentConfig c = config;
  c.method = method == CoverageMethod::mc     ? mc::Method::full_geometry
             : method == CoverageMethod::app1 ? mc::Method::app1_surrogate
                                              : mc::Method::app2_surrogate;
  const mc::SirRun run = mc::run_coverage(c, tau_db);
  for (const auto &row : run.curve.rows) {
    out.table.row(coverage_cells(row.tau_db, row.estimate, format_number(row.ci_low), format_number(row.ci_high),
                                 format_number(row.n), method, config));
  }
  out.discarded = run.discarded;
  return out;
}

ExperimentOutput linkdist_experiment(const mc::ExperimentConfig &config, std::span<const double> grid) {
  if (config.dimension != 2 || config.user_process != UserProcess::type1) {
    throw ParameterError("linkdist is defined for the Type I user in d = 2");
  }
  const auto params = params_of(config);
  const mc::DistanceSamples samples = mc::collect_distance_samples(config);
  ExperimentOutput out{CsvTable({"r", "cdf_ro_empirical", "cdf_ro_eq10", "cdf_r1_empirical", "cdf_r1_eq12"})};
  for (const double r : grid) {
    out.table.row({format_number(r), format_number(samples.serving.cdf(r)),
                   format_number(analytic::cdf_ro_2d(r, params)), format_number(samples.dominant.cdf(r)),
                   format_number(analytic::cdf_r1_2d(r, params))});
  }
  out.extras["ks_ro"] = samples.serving.ks_distance([&](double r) { return analytic::cdf_ro_2d(r, params); });
  out.extras["ks_r1"] = samples.dominant.ks_distance([&](double r) { return analytic::cdf_r1_2d(r, params); });
  out.extras["ks_band95"] = samples.serving.ks_band95();
  out.extras["samples"] = samples.serving.count();
  out.discarded = samples.discarded;
  return out;
}

ExperimentOutput pcf_experiment(const mc::ExperimentConfig &config, double ro, double ro_halfwidth,
                                std::span<const double> bin_edges) {
  const mc::PcfEstimate est = mc::estimate_pcf(config, ro, ro_halfwidth, bin_edges);
  ExperimentOutput out{CsvTable({"r_center", "g_empirical", "g_app2_overlay", "pair_count"})};
  for (const auto &bin : est.bins) {
    out.table.row({format_number(bin.r_center), format_number(bin.g_value), format_number(bin.g_app2),
                   format_number(bin.pair_count)});
  }
  out.extras["ro"] = ro;
  out.extras["ro_halfwidth"] = ro_halfwidth;
  out.extras["conditioning_count"] = est.conditioning_count;
  out.discarded = est.discarded;
  return out;
}

ExperimentOutput powercdf_experiment(const mc::ExperimentConfig &config, std::size_t grid_points) {
  if (grid_points < 2) {
    throw ParameterError("powercdf needs at least 2 grid points");
  }
  mc::ExperimentConfig c1 = config;
  c1.method = mc::Method::full_geometry;
  c1.user_process = UserProcess::type1;
  mc::ExperimentConfig c2 = c1;
  c2.user_process = UserProcess::type2;
  // Same seed: both user processes see the same draws of the BS process.
  const mc::PowerSamples p1 = mc::collect_power_samples(c1);
  const mc::PowerSamples p2 = mc::collect_power_samples(c2);

  std::vector<double> pooled;
  for (const auto *d : {&p1.signal_dbm, &p2.signal_dbm, &p1.interference_dbm, &p2.interference_dbm}) {
    pooled.insert(pooled.end(), d->samples().begin(), d->samples().end());
  }
  const EmpiricalDistribution all(std::move(pooled));
  const double lo = all.quantile(0.001);
  const double hi = all.quantile(0.999);

  ExperimentOutput out{
      CsvTable({"power_dbm", "cdf_signal_type1", "cdf_signal_type2", "cdf_interf_type1", "cdf_interf_type2"})};
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double x =
        k + 1 == grid_points ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    out.table.row({format_number(x), format_number(p1.signal_dbm.cdf(x)), format_number(p2.signal_dbm.cdf(x)),
                   format_number(p1.interference_dbm.cdf(x)), format_number(p2.interference_dbm.cdf(x))});
  }
  const double m1 = p1.signal_dbm.quantile(0.5);
  const double m2 = p2.signal_dbm.quantile(0.5);
  out.extras["median_signal_type1_dbm"] = m1;
  out.extras["median_signal_type2_dbm"] = m2;
  out.extras["median_signal_gap_db"] = m1 - m2;
  out.extras["signal_ks_type1_type2"] = ks_two_sample(p1.signal_dbm, p2.signal_dbm);
  out.discarded = p1.discarded + p2.discarded;
  return out;
}

} // namespace typcell::cli
