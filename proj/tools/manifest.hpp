#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace typcell::cli {

/// Sidecar record written next to every CSV. `args` is the fully resolved
/// command line (every default spelled out), so replaying it reproduces the
/// CSV byte for byte.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  std::string version;
  std::string simd;
  double duration_s = 0.0;
  std::uint64_t discarded = 0;
  std::string output;
  nlohmann::json extras = nlohmann::json::object();

  [[nodiscard]] nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json &j);
};

/// "<csv path>.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path &csv);

void write_manifest(const RunManifest &m, const std::filesystem::path &path);
RunManifest read_manifest(const std::filesystem::path &path);

} // namespace typcell::cli
