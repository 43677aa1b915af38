#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace typcell {

using Engine = std::mt19937_64;

/// Where a realization's randomness came from: a master seed plus the
/// realization index.
struct SeedPath {
  std::uint64_t master = 0;
  std::uint64_t index = 0;
};

/// Seed of the independent substream for realization `path.index`. Mixing is
/// splitmix64 over (master, index), so a realization depends only on its own
/// path and not on scheduling.
std::uint64_t substream_seed(SeedPath path) noexcept;

inline Engine make_substream(SeedPath path) { return Engine(substream_seed(path)); }

/// Uniform on [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Engine &eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

/// Unit-mean exponential variate, -log(1 - U).
inline double unit_exponential(Engine &eng) { return -std::log1p(-uniform01(eng)); }

/// Fills `out` with unit-mean exponentials through the vectorized -log
/// kernel. Consumes one engine output per element.
void fill_unit_exponential(Engine &eng, std::span<double> out);

/// Isotropic unit vector by rejection from the square [-1, 1]^2.
struct Direction {
  double cos = 1.0;
  double sin = 0.0;
};
Direction unit_direction(Engine &eng);

} // namespace typcell
