#include "validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include "experiments.hpp"
#include "typcell/analytic.hpp"
#include "typcell/montecarlo.hpp"
#include "typcell/parallel.hpp"

namespace typcell::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZ99 = 2.5758293035489004;
// Two-sided 99% Kolmogorov-Smirnov coefficient.
constexpr double kKs99 = 1.6276;

struct Scale {
  bool full = false;
  std::uint64_t coverage = 10'000;     // criteria 1-4
  std::uint64_t distances = 10'000;    // criteria 5, 6
  std::uint64_t pcf = 50'000;          // criterion 7
  std::uint64_t power = 10'000;        // criterion 8
  std::uint64_t invariance = 10'000;   // criterion 9
  std::uint64_t determinism = 10'000;  // criterion 10
};

Scale scale_for(ValidationScale s) {
  if (s == ValidationScale::full) {
    return {true, 1'000'000, 100'000, 1'000'000, 200'000, 100'000, 20'000};
  }
  return {};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double binomial_se(double p, std::uint64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(n));
}

std::vector<double> tau_grid() { return Range{-10.0, 20.0, 1.0}.values(); }

class Context {
public:
  Context(const ValidationOptions &o) : opt(o), sc(scale_for(o.scale)) {}

  const ValidationOptions &opt;
  Scale sc;

  [[nodiscard]] double rho0() const { return opt.rho0.value_or(analytic::kRho0); }

  [[nodiscard]] analytic::ModelParams params(double alpha, int dim, double lambda = 1.0) const {
    return analytic::ModelParams::make(alpha, lambda, dim, rho0());
  }

  [[nodiscard]] mc::ExperimentConfig config(int dim, UserProcess process, mc::Method method, std::uint64_t n,
                                            double alpha = 4.0, double lambda = 1.0) const {
    mc::ExperimentConfig c;
    c.dimension = dim;
    c.alpha = alpha;
    c.lambda = lambda;
    c.user_process = process;
    c.method = method;
    c.realizations = n;
    c.master_seed = opt.seed;
    c.rho0 = rho0();
    c.threads = opt.threads;
    return c;
  }

  // Stated tolerance at full scale; at quick scale at least 3 standard errors.
  [[nodiscard]] double mc_tolerance(double stated, double p, std::uint64_t n) const {
    return sc.full ? stated : std::max(stated, 3.0 * binomial_se(p, n));
  }
};

CriterionResult named(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

CriterionResult type2_closed_form(const Context &ctx) {
  CriterionResult r = named(1, "type2-closed-form");
  const double exact = 1.0 / (1.0 + kPi / 4.0);
  const double pin = analytic::coverage_type2(1.0, analytic::ModelParams::make(4.0, 1.0, 2), 2);
  const bool pin_ok = std::abs(pin - exact) <= 1e-9;

  const auto cfg = ctx.config(2, UserProcess::type2, mc::Method::full_geometry, ctx.sc.coverage);
  const double tau_db[] = {0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const mc::SirRun run = mc::run_coverage(cfg, tau_db);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto &row = run.curve.rows.front();
  const double tol = ctx.mc_tolerance(0.002, exact, row.n);
  const double diff = std::abs(row.estimate - exact);
  const bool budget_ok = secs < 60.0;

  r.passed = pin_ok && diff <= tol && budget_ok;
  r.detail = "closed form " + fmt(pin, 10) + " (err " + fmt(std::abs(pin - exact), 2) + "), MC " +
             fmt(row.estimate, 5) + " at n=" + std::to_string(row.n) + " |diff| " + fmt(diff, 3) + " <= " +
             fmt(tol, 3) + "?, MC runtime " + fmt(secs, 3) + " s (budget 60 s)";
  return r;
}

CriterionResult exact_1d(const Context &ctx) {
  CriterionResult r = named(2, "type1-1d-exact-vs-mc");
  const std::vector<double> tau_db = {-5.0, 0.0, 5.0, 10.0};
  std::ostringstream detail;
  int outside = 0;
  for (const double alpha : {3.0, 4.0}) {
    const auto cfg = ctx.config(1, UserProcess::type1, mc::Method::full_geometry, ctx.sc.coverage, alpha);
    const mc::SirRun run = mc::run_coverage(cfg, tau_db);
    const auto params = ctx.params(alpha, 1);
    for (const auto &row : run.curve.rows) {
      const double exact = analytic::coverage_type1_1d(db_to_linear(row.tau_db), params);
      const auto successes = static_cast<std::uint64_t>(std::llround(row.estimate * static_cast<double>(row.n)));
      const Interval95 ci = wilson_interval(successes, row.n, kZ99);
      const bool inside = exact >= ci.low && exact <= ci.high;
      if (!inside) {
        ++outside;
      }
      detail << (inside ? "" : "!") << "a=" << alpha << "/" << row.tau_db << "dB " << fmt(exact, 5) << " in ["
             << fmt(ci.low, 5) << "," << fmt(ci.high, 5) << "] ";
    }
  }
  r.passed = outside == 0;
  r.detail = std::to_string(outside) + " of 8 points outside the 99% CI; " + detail.str();
  return r;
}

// Max |analytic - MC| over the threshold grid, with the tau values that break
// the tolerance.
CriterionResult approx_against(const Context &ctx, int id, const char *name, mc::Method method, double stated) {
  CriterionResult r = named(id, name);
  const auto grid = tau_grid();
  const auto params = ctx.params(4.0, 2);
  const auto cfg = ctx.config(2, UserProcess::type1, method, ctx.sc.coverage);
  const mc::SirRun run = mc::run_coverage(cfg, grid);
  double worst = 0.0;
  double worst_tau = 0.0;
  std::ostringstream over;
  for (const auto &row : run.curve.rows) {
    const double eq = analytic::coverage_type1_2d(db_to_linear(row.tau_db), params);
    const double diff = std::abs(eq - row.estimate);
    const double tol = ctx.mc_tolerance(stated, eq, row.n);
    if (diff > worst) {
      worst = diff;
      worst_tau = row.tau_db;
    }
    if (diff > tol) {
      over << " " << row.tau_db << "dB:" << fmt(eq, 4) << "vs" << fmt(row.estimate, 4);
    }
  }
  r.passed = over.str().empty();
  r.detail = "max |diff| " + fmt(worst, 3) + " at " + fmt(worst_tau) + " dB (tolerance " + fmt(stated) +
             (ctx.sc.full ? "" : ", widened to 3 SE at quick scale") + "), n=" +
             std::to_string(run.curve.rows.front().n) + (r.passed ? "" : "; outside:" + over.str());
  return r;
}

CriterionResult link_distances(const Context &ctx) {
  CriterionResult r = named(5, "link-distance-ks");
  const auto cfg = ctx.config(2, UserProcess::type1, mc::Method::full_geometry, ctx.sc.distances);
  const auto params = ctx.params(4.0, 2);
  const mc::DistanceSamples s = mc::collect_distance_samples(cfg);
  const double ks_ro = s.serving.ks_distance([&](double v) { return analytic::cdf_ro_2d(v, params); });
  const double ks_r1 = s.dominant.ks_distance([&](double v) { return analytic::cdf_r1_2d(v, params); });
  const double noise = kKs99 / std::sqrt(static_cast<double>(s.serving.count()));
  const double tol_ro = ctx.sc.full ? 0.01 : std::max(0.01, noise);
  const double tol_r1 = ctx.sc.full ? 0.02 : std::max(0.02, noise);
  r.passed = ks_ro < tol_ro && ks_r1 < tol_r1;
  r.detail = "KS(R0) " + fmt(ks_ro, 3) + " < " + fmt(tol_ro, 3) + "?, KS(R1) " + fmt(ks_r1, 3) + " < " +
             fmt(tol_r1, 3) + "?, n=" + std::to_string(s.serving.count()) + ", discarded " +
             std::to_string(s.discarded);
  return r;
}

CriterionResult area_ratio(const Context &ctx) {
  CriterionResult r = named(6, "crofton-typical-area-ratio");
  const auto cfg = ctx.config(2, UserProcess::type1, mc::Method::full_geometry, ctx.sc.distances);
  const mc::CellSizeSamples s = mc::collect_cell_sizes(cfg);
  double typical = 0.0;
  double crofton = 0.0;
  for (std::size_t i = 0; i < s.typical.size(); ++i) {
    typical += s.typical[i];
    crofton += s.crofton[i];
  }
  const double ratio = crofton / typical;
  const double target = ctx.rho0();
  r.passed = std::abs(ratio / target - 1.0) <= 0.03;
  r.detail = "E[crofton]/E[typical] " + fmt(ratio, 5) + " vs " + fmt(target, 5) + " +- 3%, mean typical area " +
             fmt(typical / static_cast<double>(s.typical.size()), 4) + ", n=" + std::to_string(s.typical.size());
  return r;
}

CriterionResult clustering(const Context &ctx) {
  CriterionResult r = named(7, "pcf-clustering");
  const auto cfg = ctx.config(2, UserProcess::type1, mc::Method::full_geometry, ctx.sc.pcf);
  const double ro = 0.3;
  const double hw = mc::default_ro_halfwidth(1.0);
  const auto edges = Range{0.0, 4.0, 0.05}.values();
  const mc::PcfEstimate est = mc::estimate_pcf(cfg, ro, hw, edges);

  bool empty_below = true;
  double peak = 0.0;
  double far_worst = 0.0;
  bool far_ok = true;
  for (const auto &b : est.bins) {
    if (b.r_high <= ro - hw && b.pair_count != 0) {
      empty_below = false;
    }
    if (b.r_low >= ro - 1e-12 && b.r_high <= 0.6 + 1e-12) {
      peak = std::max(peak, b.g_value);
    }
    if (b.r_low >= 3.0 - 1e-12 && b.r_high <= 4.0 + 1e-12) {
      const double expected = static_cast<double>(est.conditioning_count) * kPi * (b.r_high * b.r_high - b.r_low * b.r_low);
      const double tol = ctx.sc.full ? 0.05 : std::max(0.05, 3.0 / std::sqrt(expected));
      far_worst = std::max(far_worst, std::abs(b.g_value - 1.0));
      if (std::abs(b.g_value - 1.0) > tol) {
        far_ok = false;
      }
    }
  }
  r.passed = empty_below && peak > 1.05 && far_ok;
  r.detail = std::string("g=0 below R0: ") + (empty_below ? "yes" : "no") + ", max g in (0.3,0.6) " + fmt(peak, 4) +
             " > 1.05?, max |g-1| in (3,4) " + fmt(far_worst, 3) + ", conditioning draws " +
             std::to_string(est.conditioning_count);
  return r;
}

CriterionResult ordering(const Context &ctx) {
  CriterionResult r = named(8, "ordering");
  const auto params = ctx.params(4.0, 2);
  double app1_gap = std::numeric_limits<double>::infinity();
  for (const double t_db : tau_grid()) {
    const double tau = db_to_linear(t_db);
    app1_gap = std::min(app1_gap, analytic::coverage_type1_app1_2d(tau, params) - analytic::coverage_type1_2d(tau, params));
  }
  const bool app1_ok = app1_gap >= -1e-12;

  auto cfg = ctx.config(2, UserProcess::type1, mc::Method::full_geometry, ctx.sc.power, 4.0, 1e-5);
  cfg.tx_power_dbm = 30.0;
  const mc::PowerSamples p1 = mc::collect_power_samples(cfg);
  cfg.user_process = UserProcess::type2;
  const mc::PowerSamples p2 = mc::collect_power_samples(cfg);

  // F_II(x) >= F_I(x) up to the two-sample 99% KS noise.
  const double n1 = static_cast<double>(p1.signal_dbm.count());
  const double n2 = static_cast<double>(p2.signal_dbm.count());
  const double slack = kKs99 * std::sqrt((n1 + n2) / (n1 * n2));
  double violation = 0.0;
  for (const double x : p1.signal_dbm.samples()) {
    violation = std::max(violation, p1.signal_dbm.cdf(x) - p2.signal_dbm.cdf(x));
  }
  const bool dominance_ok = violation <= slack;
  const double gap = p1.signal_dbm.quantile(0.5) - p2.signal_dbm.quantile(0.5);
  const bool gap_ok = gap >= 1.0 && gap <= 4.0;

  r.passed = app1_ok && dominance_ok && gap_ok;
  r.detail = "min(App1 - approx) " + fmt(app1_gap, 3) + ", max(F_I - F_II) signal " + fmt(violation, 3) +
             " <= " + fmt(slack, 3) + "?, median signal gap " + fmt(gap, 4) + " dB in [1,4]?";
  return r;
}

CriterionResult invariance(const Context &ctx) {
  CriterionResult r = named(9, "density-invariance");
  const double lambdas[] = {0.5, 1.0, 4.0};
  std::ostringstream bad;

  // Analytic: the 2-D forms and the 1-D Type II form do not involve lambda at
  // all; the 1-D Type I form does, through its quadrature.
  const double tau = 1.0;
  const auto base2 = ctx.params(4.0, 2, 1.0);
  const auto base1 = ctx.params(4.0, 1, 1.0);
  const double ref_1d = analytic::coverage_type1_1d(tau, base1);
  double worst_1d = 0.0;
  for (const double lambda : lambdas) {
    const auto p2 = ctx.params(4.0, 2, lambda);
    const auto p1 = ctx.params(4.0, 1, lambda);
    if (analytic::coverage_type2(tau, p2, 2) != analytic::coverage_type2(tau, base2, 2) ||
        analytic::coverage_type2(tau, p1, 1) != analytic::coverage_type2(tau, base1, 1) ||
        analytic::coverage_type1_2d(tau, p2) != analytic::coverage_type1_2d(tau, base2) ||
        analytic::coverage_type1_app1_2d(tau, p2) != analytic::coverage_type1_app1_2d(tau, base2)) {
      bad << " analytic-2d@" << lambda;
    }
    if (lambda != 1.0) {
      const double d = std::abs(analytic::coverage_type1_1d(tau, p1) - ref_1d);
      worst_1d = std::max(worst_1d, d);
      if (d > 1e-6) {
        bad << " analytic-1d@" << lambda;
      }
    }
  }

  struct Setup {
    const char *name;
    int dim;
    UserProcess process;
    mc::Method method;
  };
  const Setup setups[] = {{"type1-2d", 2, UserProcess::type1, mc::Method::full_geometry},
                          {"type2-2d", 2, UserProcess::type2, mc::Method::full_geometry},
                          {"app2", 2, UserProcess::type1, mc::Method::app2_surrogate},
                          {"type1-1d", 1, UserProcess::type1, mc::Method::full_geometry}};
  const std::vector<double> tau_db = {-5.0, 0.0, 5.0, 10.0};
  double worst_z = 0.0;
  for (const auto &s : setups) {
    std::vector<mc::CoverageCurve> curves;
    for (std::size_t k = 0; k < std::size(lambdas); ++k) {
      auto cfg = ctx.config(s.dim, s.process, s.method, ctx.sc.invariance, 4.0, lambdas[k]);
      // Distinct seeds: the same seed would give exactly rescaled geometry.
      cfg.master_seed = ctx.opt.seed + 1000 * (k + 1);
      curves.push_back(mc::run_coverage(cfg, tau_db).curve);
    }
    for (std::size_t k : {std::size_t{0}, std::size_t{2}}) {
      for (std::size_t t = 0; t < tau_db.size(); ++t) {
        const auto &a = curves[1].rows[t];
        const auto &b = curves[k].rows[t];
        const double pooled = 0.5 * (a.estimate + b.estimate);
        const double se = std::sqrt(std::max(pooled * (1.0 - pooled), 1e-12) *
                                    (1.0 / static_cast<double>(a.n) + 1.0 / static_cast<double>(b.n)));
        const double z = std::abs(a.estimate - b.estimate) / se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) {
          bad << " " << s.name << "@" << lambdas[k] << "/" << tau_db[t] << "dB";
        }
      }
    }
  }
  r.passed = bad.str().empty();
  r.detail = "2-D and Type II analytic forms identical across lambda, 1-D exact max drift " + fmt(worst_1d, 2) +
             ", MC max |z| " + fmt(worst_z, 3) + " (limit 3) over 4 setups x 4 thresholds" +
             (r.passed ? "" : "; failing:" + bad.str());
  return r;
}

CriterionResult determinism(const Context &ctx) {
  CriterionResult r = named(10, "determinism");
  const auto grid = tau_grid();
  const auto dist_grid = Range{0.0, 3.0, 0.05}.values();
  auto render_all = [&](std::size_t workers) {
    std::string text;
    for (const auto method : {mc::Method::full_geometry, mc::Method::app2_surrogate}) {
      auto cfg = ctx.config(2, UserProcess::type1, method, ctx.sc.determinism);
      cfg.threads = workers;
      text += coverage_experiment(cfg, method == mc::Method::full_geometry ? CoverageMethod::mc : CoverageMethod::app2,
                                  grid)
                  .table.render();
    }
    auto cfg = ctx.config(1, UserProcess::type2, mc::Method::full_geometry, ctx.sc.determinism);
    cfg.threads = workers;
    text += coverage_experiment(cfg, CoverageMethod::mc, grid).table.render();
    cfg = ctx.config(2, UserProcess::type1, mc::Method::full_geometry, ctx.sc.determinism);
    cfg.threads = workers;
    text += linkdist_experiment(cfg, dist_grid).table.render();
    return text;
  };
  const std::string one = render_all(1);
  const std::string four = render_all(4);
  const std::string sixteen = render_all(16);
  r.passed = one == four && one == sixteen;
  r.detail = std::string("CSV output with 1/4/16 workers (effective ") + std::to_string(resolve_worker_count(1)) +
             "/" + std::to_string(resolve_worker_count(4)) + "/" + std::to_string(resolve_worker_count(16)) +
             "): " + (r.passed ? "bit-identical" : "DIFFERENT") + ", " + std::to_string(one.size()) + " bytes";
  return r;
}

} // namespace

std::vector<CriterionResult> run_validation(const ValidationOptions &options) {
  const Context ctx(options);
  using Fn = CriterionResult (*)(const Context &);
  const Fn criteria[kCriterionCount] = {
      type2_closed_form,
      exact_1d,
      [](const Context &c) {
        return approx_against(c, 3, "approx-vs-app2-mc", mc::Method::app2_surrogate, 0.005);
      },
      [](const Context &c) {
        return approx_against(c, 4, "approx-vs-full-mc", mc::Method::full_geometry, 0.02);
      },
      link_distances,
      area_ratio,
      clustering,
      ordering,
      invariance,
      determinism,
  };
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = criteria[id - 1](ctx);
    } catch (const std::exception &e) {
      res = named(id, "criterion-" + std::to_string(id));
      res.detail = std::string("error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.on_result) {
      options.on_result(res);
    }
    results.push_back(std::move(res));
  }
  return results;
}

std::string format_result(const CriterionResult &r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " " << (r.id < 10 ? " " : "") << r.id << " " << r.name << ": " << r.detail
     << " (" << fmt(r.seconds, 3) << " s)";
  return os.str();
}

} // namespace typcell::cli
