#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "typcell/montecarlo.hpp"

namespace typcell::cli {

/// Coverage methods exposed on the command line. `app1_analytic` is the
/// closed form behind the App1 surrogate.
enum class CoverageMethod { analytic, app1_analytic, mc, app1, app2 };

std::string_view method_name(CoverageMethod m);
std::optional<CoverageMethod> parse_method(std::string_view text);

/// Inclusive arithmetic grid written "start:stop:step".
struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  [[nodiscard]] std::vector<double> values() const;
};

/// Throws ParameterError on malformed text, step <= 0 or start > stop.
Range parse_range(std::string_view text);

struct ExperimentOutput {
  CsvTable table;
  nlohmann::json extras = nlohmann::json::object();
  std::uint64_t discarded = 0;
};

/// Coverage curve over `tau_db`. Analytic rows leave n and the CI empty.
ExperimentOutput coverage_experiment(const mc::ExperimentConfig &config, CoverageMethod method,
                                     std::span<const double> tau_db);

/// Empirical Type I link and dominant-interferer distance CDFs against their
/// approximations, on `grid`. KS distances go to the extras.
ExperimentOutput linkdist_experiment(const mc::ExperimentConfig &config, std::span<const double> grid);

/// Conditional pcf around the Type I user for one link distance.
ExperimentOutput pcf_experiment(const mc::ExperimentConfig &config, double ro, double ro_halfwidth,
                                std::span<const double> bin_edges);

/// Signal and interference power CDFs for both user processes on a shared
/// grid between the pooled 0.1% and 99.9% quantiles.
ExperimentOutput powercdf_experiment(const mc::ExperimentConfig &config, std::size_t grid_points);

} // namespace typcell::cli
