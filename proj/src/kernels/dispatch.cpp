#include <cstdlib>
#include <string_view>

#include "typcell/kernels.hpp"

namespace typcell::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::path_gain_sum_2d, &scalar::path_gain_sum_1d,
                              &scalar::nearest_2d, &scalar::neg_log};

#if defined(TYPCELL_WITH_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::path_gain_sum_2d, &avx2::path_gain_sum_1d, &avx2::nearest_2d,
                             &avx2::neg_log};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable &select() {
  const char *forced = std::getenv("TYPCELL_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    return kScalar;
  }
  if (const KernelTable *t = table_for(Isa::avx2)) {
    return *t;
  }
  return kScalar;
}

} // namespace

const KernelTable *table_for(Isa isa) {
  switch (isa) {
  case Isa::scalar:
    return &kScalar;
  case Isa::avx2:
#if defined(TYPCELL_WITH_AVX2)
    return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable &active() {
  static const KernelTable &table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
  case Isa::scalar:
    return "scalar";
  case Isa::avx2:
    return "avx2";
  }
  return "unknown";
}

} // namespace typcell::kernels
