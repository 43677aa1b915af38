#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typcell/analytic.hpp"
#include "typcell/empirical.hpp"
#include "typcell/pointprocess.hpp"

namespace typcell::mc {

enum class Method { full_geometry, app1_surrogate, app2_surrogate };

std::string_view method_tag(Method m);
std::string_view process_tag(UserProcess p);

/// Runs abort once more than this fraction of realizations is discarded.
inline constexpr double kMaxDiscardFraction = 1e-3;

struct ExperimentConfig {
  int dimension = 2;
  double lambda = 1.0;
  double alpha = 4.0;
  UserProcess user_process = UserProcess::type1;
  Method method = Method::full_geometry;
  std::uint64_t realizations = 1'000'000;
  std::uint64_t master_seed = 1;
  /// Defaults to SimWindow::default_for(dimension, lambda).
  std::optional<SimWindow> window;
  double tx_power_dbm = 30.0;
  /// Correction factors for the surrogate simulators.
  double rho0 = analytic::kRho0;
  double rho1 = std::numeric_limits<double>::quiet_NaN();
  /// 0 = all hardware threads (still capped by TYPCELL_THREADS).
  std::size_t threads = 0;

  [[nodiscard]] SimWindow resolved_window() const;
  [[nodiscard]] double resolved_rho1() const;
  void validate() const;
};

struct CoverageRow {
  double tau_db = 0.0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n = 0;
  std::string method;
};

struct CoverageCurve {
  std::vector<CoverageRow> rows;
};

struct SirRun {
  CoverageCurve curve;
  std::uint64_t discarded = 0;
  /// Per-realization SIR in index order (NaN marks a discarded index); only
  /// filled when requested.
  std::vector<double> sir;
};

/// Full-geometry SIR simulation. Each realization samples Psi, places the
/// user (Type I: uniform in the typical cell, Type II: the origin), draws
/// unit-mean exponential fading per BS and evaluates
///   SIR = h0 R0^-alpha / sum_x h_x |x - y|^-alpha
/// over all in-window interferers. One pass serves the whole threshold grid.
SirRun run_sir_experiment(const ExperimentConfig &config, std::span<const double> tau_db,
                          bool keep_samples = false);

/// App1 / App2 surrogate simulation (d = 2 only). App1: R0 drawn from the
/// link-distance approximation, interferers a PPP(lambda) beyond R0 around
/// the user. App2: additionally a dominant interferer at R1 (conditional law
/// given R0, isotropic direction) and the PPP beyond R1.
SirRun run_surrogate_experiment(const ExperimentConfig &config, std::span<const double> tau_db,
                                bool keep_samples = false);

/// Dispatches on config.method.
SirRun run_coverage(const ExperimentConfig &config, std::span<const double> tau_db, bool keep_samples = false);

struct DistanceSamples {
  EmpiricalDistribution serving;  // R0
  EmpiricalDistribution dominant; // R1
  std::uint64_t discarded = 0;
};

/// Link distance and nearest-interferer distance per realization.
DistanceSamples collect_distance_samples(const ExperimentConfig &config);

struct PowerSamples {
  EmpiricalDistribution signal_dbm;
  EmpiricalDistribution interference_dbm;
  std::uint64_t discarded = 0;
};

/// Received desired and aggregate interference power in dBm at transmit
/// power config.tx_power_dbm.
PowerSamples collect_power_samples(const ExperimentConfig &config);

struct PcfBin {
  double r_low = 0.0;
  double r_high = 0.0;
  double r_center = 0.0;
  double g_value = 0.0;
  std::uint64_t pair_count = 0;
  /// Dominant-interferer surrogate pcf at r_center, averaged over the
  /// conditioning link distances.
  double g_app2 = 0.0;
};

struct PcfEstimate {
  double ro_center = 0.0;
  double ro_halfwidth = 0.0;
  double normalization_density = 0.0;
  std::uint64_t conditioning_count = 0;
  std::uint64_t discarded = 0;
  std::vector<PcfBin> bins;
};

/// Minimum number of realizations with R0 in the conditioning bin.
inline constexpr std::uint64_t kMinPcfConditioning = 1000;

/// Pair correlation of the interferers seen from the Type I user, conditioned
/// on R0 in ro_center +- ro_halfwidth: mean count per annulus divided by
/// lambda times the annulus area. `bin_edges` must be increasing.
PcfEstimate estimate_pcf(const ExperimentConfig &config, double ro_center, double ro_halfwidth,
                         std::span<const double> bin_edges);

/// Default conditioning half-width, 0.025 / sqrt(lambda).
double default_ro_halfwidth(double lambda);

struct CellSizeSamples {
  std::vector<double> typical; // |V_o|
  std::vector<double> crofton; // cell of Psi containing the origin
  std::uint64_t discarded = 0;
};

/// Typical-cell and Crofton-cell sizes (length or area) from the same draw of
/// Psi, in realization order.
CellSizeSamples collect_cell_sizes(const ExperimentConfig &config);

} // namespace typcell::mc
