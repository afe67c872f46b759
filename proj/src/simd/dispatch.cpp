#include <cstdlib>
#include <string>

#include "grafield/simd/kernels.hpp"

namespace grafield::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(GRAFIELD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(GRAFIELD_HAVE_NEON)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* kernels_for(Isa isa) noexcept {
  if (!isa_supported(isa)) return nullptr;
  switch (isa) {
    case Isa::Scalar: return &scalar_kernels();
#if defined(GRAFIELD_HAVE_AVX2)
    case Isa::Avx2: return &avx2_kernels();
#endif
#if defined(GRAFIELD_HAVE_NEON)
    case Isa::Neon: return &neon_kernels();
#endif
    default: return nullptr;
  }
}

namespace {

const KernelTable& select() noexcept {
  if (const char* forced = std::getenv("GRAFIELD_SIMD")) {
    const std::string name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == isa_name(isa)) {
        if (const KernelTable* t = kernels_for(isa)) return *t;
      }
    }
  }
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* t = kernels_for(isa)) return *t;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace grafield::simd
