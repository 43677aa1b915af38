#include "manifest.hpp"

#include <fstream>
#include <stdexcept>

#include "typcell/errors.hpp"

namespace typcell::cli {

nlohmann::json RunManifest::to_json() const {
  return {{"command", command}, {"args", args},         {"config", config},
          {"master_seed", master_seed}, {"version", version}, {"simd", simd},
          {"duration_s", duration_s},   {"discarded", discarded}, {"output", output},
          {"extras", extras}};
}

RunManifest RunManifest::from_json(const nlohmann::json &j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.args = j.at("args").get<std::vector<std::string>>();
  m.config = j.value("config", nlohmann::json::object());
  m.master_seed = j.value("master_seed", std::uint64_t{0});
  m.version = j.value("version", std::string{});
  m.simd = j.value("simd", std::string{});
  m.duration_s = j.value("duration_s", 0.0);
  m.discarded = j.value("discarded", std::uint64_t{0});
  m.output = j.value("output", std::string{});
  m.extras = j.value("extras", nlohmann::json::object());
  return m;
}

std::filesystem::path manifest_path_for(const std::filesystem::path &csv) {
  return csv.string() + ".manifest.json";
}

void write_manifest(const RunManifest &m, const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << m.to_json().dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ParameterError("cannot read manifest " + path.string());
  }
  try {
    return RunManifest::from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::exception &e) {
    throw ParameterError("malformed manifest " + path.string() + ": " + e.what());
  }
}

} // namespace typcell::cli
