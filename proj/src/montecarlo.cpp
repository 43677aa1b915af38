#include "typcell/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "typcell/errors.hpp"
#include "typcell/kernels.hpp"
#include "typcell/parallel.hpp"

namespace typcell::mc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void check_discards(std::uint64_t discarded, std::uint64_t total, std::string_view what) {
  if (total > 0 && static_cast<double>(discarded) > kMaxDiscardFraction * static_cast<double>(total)) {
    std::ostringstream os;
    os << what << ": " << discarded << " of " << total
       << " realizations discarded (cell not closed inside the window); enlarge the window";
    throw SimulationError(os.str());
  }
}

std::uint64_t count_nan(std::span<const double> values) {
  return static_cast<std::uint64_t>(std::count_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }));
}

struct LinkSample {
  double signal = kNaN;       // h0 R0^-alpha
  double interference = kNaN; // sum h_x |x - y|^-alpha
};

double aggregate_interference(const NetworkRealization &r, std::span<const double> fading, double alpha) {
  if (r.dimension == 1) {
    return kernels::path_gain_sum_1d(r.interferers.x, fading, r.user.x, alpha);
  }
  return kernels::path_gain_sum_2d(r.interferers.x, r.interferers.y, fading, r.user.x, r.user.y, alpha);
}

// Geometry first, then fading: h0 for the serving link, then one gain per
// interferer in stored order.
LinkSample full_geometry_link(const ExperimentConfig &config, const SimWindow &window, std::uint64_t index,
                              std::vector<double> &fading) {
  const SeedPath path{config.master_seed, index};
  Engine eng = make_substream(path);
  const auto realization = realize(config.user_process, window, config.lambda, path, eng);
  if (!realization) {
    return {};
  }
  const double h0 = unit_exponential(eng);
  fading.resize(realization->interferers.size());
  fill_unit_exponential(eng, fading);
  LinkSample out;
  out.signal = h0 * std::pow(realization->serving_distance, -config.alpha);
  out.interference = aggregate_interference(*realization, fading, config.alpha);
  return out;
}

LinkSample surrogate_link(const ExperimentConfig &config, const SimWindow &window, std::uint64_t index,
                          std::vector<double> &fading) {
  Engine eng = make_substream({config.master_seed, index});
  const double rho0 = config.rho0;
  const double rho1 = config.resolved_rho1();
  const double lambda = config.lambda;

  // Inverse-CDF draws: R0^2 = E / (pi rho0 lambda), R1^2 = R0^2 + E' / (pi rho1 lambda).
  const double ro = std::sqrt(unit_exponential(eng) / (kPi * rho0 * lambda));
  double inner = ro;
  Point2 dominant{};
  const bool with_dominant = config.method == Method::app2_surrogate;
  if (with_dominant) {
    const double r1 = std::sqrt(ro * ro + unit_exponential(eng) / (kPi * rho1 * lambda));
    const Direction dir = unit_direction(eng);
    dominant = {r1 * dir.cos, r1 * dir.sin};
    inner = r1;
  }
  PointSet pts = sample_ppp_ordered(window, lambda, eng, {}, inner);
  if (with_dominant) {
    pts.x.insert(pts.x.begin(), dominant.x);
    pts.y.insert(pts.y.begin(), dominant.y);
  }

  const double h0 = unit_exponential(eng);
  fading.resize(pts.size());
  fill_unit_exponential(eng, fading);
  LinkSample out;
  out.signal = h0 * std::pow(ro, -config.alpha);
  out.interference = kernels::path_gain_sum_2d(pts.x, pts.y, fading, 0.0, 0.0, config.alpha);
  return out;
}

double sir_of(const LinkSample &s) {
  if (std::isnan(s.signal)) {
    return kNaN;
  }
  if (s.interference <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return s.signal / s.interference;
}

template <class LinkFn>
SirRun run_links(const ExperimentConfig &config, std::span<const double> tau_db, bool keep_samples,
                 LinkFn &&link, std::string_view what) {
  config.validate();
  const SimWindow window = config.resolved_window();
  const std::size_t n = config.realizations;
  const std::size_t workers = resolve_worker_count(config.threads);

  std::vector<double> sir(n, kNaN);
  std::vector<std::vector<double>> scratch(workers);
  parallel_for(n, workers, [&](std::size_t w, std::size_t i) { sir[i] = sir_of(link(config, window, i, scratch[w])); });

  SirRun run;
  run.discarded = count_nan(sir);
  check_discards(run.discarded, n, what);

  std::vector<double> sorted;
  sorted.reserve(n - run.discarded);
  for (const double v : sir) {
    if (!std::isnan(v)) {
      sorted.push_back(v);
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const auto accepted = static_cast<std::uint64_t>(sorted.size());
  const std::string tag(method_tag(config.method));
  for (const double t_db : tau_db) {
    const double tau = db_to_linear(t_db);
    const auto above = static_cast<std::uint64_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), tau));
    const Interval95 ci = wilson_interval(above, accepted);
    const double estimate = accepted == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(accepted);
    run.curve.rows.push_back({t_db, estimate, ci.low, ci.high, accepted, tag});
  }
  if (keep_samples) {
    run.sir = std::move(sir);
  }
  return run;
}

} // namespace

std::string_view method_tag(Method m) {
  switch (m) {
  case Method::full_geometry:
    return "mc";
  case Method::app1_surrogate:
    return "app1";
  case Method::app2_surrogate:
    return "app2";
  }
  return "unknown";
}

std::string_view process_tag(UserProcess p) { return p == UserProcess::type1 ? "type1" : "type2"; }

SimWindow ExperimentConfig::resolved_window() const {
  return window ? *window : SimWindow::default_for(dimension, lambda);
}

double ExperimentConfig::resolved_rho1() const { return std::isnan(rho1) ? rho0 : rho1; }

void ExperimentConfig::validate() const {
  if (dimension != 1 && dimension != 2) {
    throw ParameterError("dimension must be 1 or 2");
  }
  analytic::ModelParams::make(alpha, lambda, dimension, rho0, rho1);
  if (realizations < 1) {
    throw ParameterError("realizations must be >= 1");
  }
  const SimWindow w = resolved_window();
  if (w.dimension != dimension) {
    throw ParameterError("window dimension does not match the experiment dimension");
  }
  w.validate(lambda);
  if (method != Method::full_geometry) {
    if (dimension != 2) {
      throw ParameterError("surrogate methods are defined for d = 2 only");
    }
    if (user_process != UserProcess::type1) {
      throw ParameterError("surrogate methods model the Type I user only");
    }
  }
}

SirRun run_sir_experiment(const ExperimentConfig &config, std::span<const double> tau_db, bool keep_samples) {
  if (config.method != Method::full_geometry) {
    throw ParameterError("run_sir_experiment expects the full-geometry method");
  }
  return run_links(config, tau_db, keep_samples, full_geometry_link, "run_sir_experiment");
}

SirRun run_surrogate_experiment(const ExperimentConfig &config, std::span<const double> tau_db, bool keep_samples) {
  if (config.method == Method::full_geometry) {
    throw ParameterError("run_surrogate_experiment expects app1 or app2");
  }
  return run_links(config, tau_db, keep_samples, surrogate_link, "run_surrogate_experiment");
}

SirRun run_coverage(const ExperimentConfig &config, std::span<const double> tau_db, bool keep_samples) {
  return config.method == Method::full_geometry ? run_sir_experiment(config, tau_db, keep_samples)
                                                : run_surrogate_experiment(config, tau_db, keep_samples);
}

DistanceSamples collect_distance_samples(const ExperimentConfig &config) {
  config.validate();
  const SimWindow window = config.resolved_window();
  const std::size_t n = config.realizations;
  std::vector<double> ro(n, kNaN);
  std::vector<double> r1(n, kNaN);
  parallel_for(n, resolve_worker_count(config.threads), [&](std::size_t, std::size_t i) {
    const SeedPath path{config.master_seed, i};
    Engine eng = make_substream(path);
    if (const auto r = realize(config.user_process, window, config.lambda, path, eng)) {
      ro[i] = r->serving_distance;
      r1[i] = r->dominant_interferer_distance;
    }
  });
  DistanceSamples out;
  out.discarded = count_nan(ro);
  check_discards(out.discarded, n, "collect_distance_samples");
  std::erase_if(ro, [](double v) { return std::isnan(v); });
  std::erase_if(r1, [](double v) { return std::isnan(v); });
  out.serving = EmpiricalDistribution(std::move(ro));
  out.dominant = EmpiricalDistribution(std::move(r1));
  return out;
}

PowerSamples collect_power_samples(const ExperimentConfig &config) {
  config.validate();
  const SimWindow window = config.resolved_window();
  const std::size_t n = config.realizations;
  const std::size_t workers = resolve_worker_count(config.threads);
  std::vector<double> signal(n, kNaN);
  std::vector<double> interference(n, kNaN);
  std::vector<std::vector<double>> scratch(workers);
  parallel_for(n, workers, [&](std::size_t w, std::size_t i) {
    const LinkSample s = config.method == Method::full_geometry ? full_geometry_link(config, window, i, scratch[w])
                                                                : surrogate_link(config, window, i, scratch[w]);
    if (!std::isnan(s.signal)) {
      signal[i] = config.tx_power_dbm + 10.0 * std::log10(s.signal);
      interference[i] = config.tx_power_dbm + 10.0 * std::log10(s.interference);
    }
  });
  PowerSamples out;
  out.discarded = count_nan(signal);
  check_discards(out.discarded, n, "collect_power_samples");
  std::erase_if(signal, [](double v) { return std::isnan(v); });
  std::erase_if(interference, [](double v) { return std::isnan(v); });
  out.signal_dbm = EmpiricalDistribution(std::move(signal));
  out.interference_dbm = EmpiricalDistribution(std::move(interference));
  return out;
}

double default_ro_halfwidth(double lambda) { return 0.025 / std::sqrt(lambda); }

PcfEstimate estimate_pcf(const ExperimentConfig &config, double ro_center, double ro_halfwidth,
                         std::span<const double> bin_edges) {
  config.validate();
  if (config.dimension != 2 || config.user_process != UserProcess::type1) {
    throw ParameterError("estimate_pcf: defined for the Type I user in d = 2");
  }
  if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end()) || bin_edges.front() < 0.0 ||
      std::adjacent_find(bin_edges.begin(), bin_edges.end()) != bin_edges.end()) {
    throw ParameterError("estimate_pcf: bin edges must be >= 0 and strictly increasing");
  }
  if (!(ro_halfwidth > 0.0) || !(ro_center > 0.0)) {
    throw ParameterError("estimate_pcf: ro_center and ro_halfwidth must be > 0");
  }
  const SimWindow window = config.resolved_window();
  const std::size_t n = config.realizations;
  const std::size_t nbins = bin_edges.size() - 1;
  const std::size_t workers = resolve_worker_count(config.threads);
  const double lo = ro_center - ro_halfwidth;
  const double hi = ro_center + ro_halfwidth;
  const double r_max = bin_edges.back();

  std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(nbins, 0));
  std::vector<double> conditioned_ro(n, kNaN);
  std::vector<char> flagged(n, 0);

  parallel_for(n, workers, [&](std::size_t w, std::size_t i) {
    const SeedPath path{config.master_seed, i};
    Engine eng = make_substream(path);
    const auto r = realize(UserProcess::type1, window, config.lambda, path, eng);
    if (!r) {
      flagged[i] = 1;
      return;
    }
    if (r->serving_distance < lo || r->serving_distance > hi) {
      return;
    }
    conditioned_ro[i] = r->serving_distance;
    auto &hist = counts[w];
    const auto &xs = r->interferers.x;
    const auto &ys = r->interferers.y;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double d = std::hypot(xs[k] - r->user.x, ys[k] - r->user.y);
      if (d < bin_edges.front() || d >= r_max) {
        continue;
      }
      const auto b = static_cast<std::size_t>(std::upper_bound(bin_edges.begin(), bin_edges.end(), d) -
                                              bin_edges.begin()) -
                     1;
      ++hist[b];
    }
  });

  PcfEstimate out;
  out.ro_center = ro_center;
  out.ro_halfwidth = ro_halfwidth;
  out.normalization_density = config.lambda;
  out.discarded = static_cast<std::uint64_t>(std::count(flagged.begin(), flagged.end(), 1));
  check_discards(out.discarded, n, "estimate_pcf");

  std::vector<double> ros;
  for (const double v : conditioned_ro) {
    if (!std::isnan(v)) {
      ros.push_back(v);
    }
  }
  out.conditioning_count = ros.size();
  if (out.conditioning_count < kMinPcfConditioning) {
    std::ostringstream os;
    os << "estimate_pcf: only " << out.conditioning_count << " realizations with R0 in [" << lo << ", " << hi
       << "]; at least " << kMinPcfConditioning << " are required, increase --realizations";
    throw SimulationError(os.str());
  }

  const auto params = analytic::ModelParams::make(config.alpha, config.lambda, 2, config.rho0, config.rho1);
  const double cond = static_cast<double>(out.conditioning_count);
  for (std::size_t b = 0; b < nbins; ++b) {
    PcfBin bin;
    bin.r_low = bin_edges[b];
    bin.r_high = bin_edges[b + 1];
    bin.r_center = 0.5 * (bin.r_low + bin.r_high);
    for (const auto &hist : counts) {
      bin.pair_count += hist[b];
    }
    const double annulus = kPi * (bin.r_high * bin.r_high - bin.r_low * bin.r_low);
    bin.g_value = static_cast<double>(bin.pair_count) / cond / (config.lambda * annulus);
    double overlay = 0.0;
    for (const double ro : ros) {
      overlay += analytic::pcf_app2(bin.r_center, ro, params);
    }
    bin.g_app2 = overlay / cond;
    out.bins.push_back(bin);
  }
  return out;
}

CellSizeSamples collect_cell_sizes(const ExperimentConfig &config) {
  config.validate();
  const SimWindow window = config.resolved_window();
  const std::size_t n = config.realizations;
  std::vector<double> typical(n, kNaN);
  std::vector<double> crofton(n, kNaN);
  parallel_for(n, resolve_worker_count(config.threads), [&](std::size_t, std::size_t i) {
    Engine eng = make_substream({config.master_seed, i});
    const PointSet pts = sample_ppp_ordered(window, config.lambda, eng);
    if (window.dimension == 1) {
      const auto t = typical_cell_1d(pts.x);
      const auto c = crofton_cell_1d(pts.x);
      if (t && c) {
        typical[i] = t->length();
        crofton[i] = c->length();
      }
    } else {
      const auto t = typical_cell_2d(pts, window.radius);
      const auto c = crofton_cell_2d(pts, window.radius);
      if (t && c) {
        typical[i] = t->area();
        crofton[i] = c->area();
      }
    }
  });
  CellSizeSamples out;
  out.discarded = count_nan(typical);
  check_discards(out.discarded, n, "collect_cell_sizes");
  std::erase_if(typical, [](double v) { return std::isnan(v); });
  std::erase_if(crofton, [](double v) { return std::isnan(v); });
  out.typical = std::move(typical);
  out.crofton = std::move(crofton);
  return out;
}

} // namespace typcell::mc
