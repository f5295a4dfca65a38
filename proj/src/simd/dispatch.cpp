#include <cstdlib>
#include <string>

#include "zebra/simd.hpp"

namespace zebra::simd {

#if ZEBRA_HAVE_AVX2
const Kernels& avx2_kernels();
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const Kernels* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_kernels();
    case Isa::avx2:
#if ZEBRA_HAVE_AVX2
      __builtin_cpu_init();
      if (__builtin_cpu_supports("avx2")) return &avx2_kernels();
#endif
      return nullptr;
  }
  return nullptr;
}

namespace {

const Kernels& select_kernels() {
  if (const char* forced = std::getenv("ZEBRA_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return scalar_kernels();
    if (name == "avx2") {
      if (const Kernels* k = kernels_for(Isa::avx2)) return *k;
    }
  }
  if (const Kernels* k = kernels_for(Isa::avx2)) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& active_kernels() {
  static const Kernels& selected = select_kernels();
  return selected;
}

}  // namespace zebra::simd
