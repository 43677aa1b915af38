#include "typcell/random.hpp"

#include "typcell/kernels.hpp"

namespace typcell {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t &state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t substream_seed(SeedPath path) noexcept {
  std::uint64_t state = path.master;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (path.index * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

void fill_unit_exponential(Engine &eng, std::span<double> out) {
  for (double &v : out) {
    v = 1.0 - uniform01(eng); // (0, 1]
  }
  kernels::neg_log(out, out);
}

Direction unit_direction(Engine &eng) {
  for (;;) {
    const double a = 2.0 * uniform01(eng) - 1.0;
    const double b = 2.0 * uniform01(eng) - 1.0;
    const double r2 = a * a + b * b;
    if (r2 <= 1.0 && r2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(r2);
      return {a * inv, b * inv};
    }
  }
}

} // namespace typcell
