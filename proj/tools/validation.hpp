#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace typcell::cli {

enum class ValidationScale { quick, full };

struct ValidationOptions {
  ValidationScale scale = ValidationScale::quick;
  std::uint64_t seed = 1;
  /// Worker count for the Monte Carlo runs (0 = all hardware threads).
  std::size_t threads = 0;
  /// Replaces the link-distance correction factor everywhere it enters
  /// (fault injection: a wrong value must make the suite fail).
  std::optional<double> rho0;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
  /// Called after each criterion finishes.
  std::function<void(const struct CriterionResult &)> on_result;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs the acceptance criteria. At quick scale (10^4 realizations) every
/// Monte Carlo tolerance is widened to at least three standard errors so a
/// correct build passes; at full scale (10^6) the stated tolerances apply.
std::vector<CriterionResult> run_validation(const ValidationOptions &options);

/// "PASS  3 name: detail (12.3 s)".
std::string format_result(const CriterionResult &r);

} // namespace typcell::cli
