#pragma once

// Dense double-precision inner loops shared by the spectral, clustering and
// regression code. Each kernel has a portable scalar reference implementation
// and optional AVX2 / NEON variants; the variant is chosen once at startup from
// the CPU feature flags and can be pinned with GRAFIELD_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <span>
#include <string_view>

namespace grafield::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

/// Function table for one instruction set. All spans passed to a kernel must
/// have equal length; the dispatch wrappers below check this in debug builds.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = factor * a[i] * b[i]
  void (*scaled_product)(double factor, const double* a, const double* b, double* out, std::size_t n);
  // sum_i w[i] * (c[i] - center)^2
  double (*weighted_squared_deviation)(const double* c, const double* w, double center, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(GRAFIELD_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(GRAFIELD_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

/// True when the running CPU can execute the given table.
bool isa_supported(Isa isa) noexcept;

/// Kernels selected for this process.
const KernelTable& active() noexcept;

/// Table for a specific ISA, or nullptr if it was not compiled in or the CPU
/// lacks the feature.
const KernelTable* kernels_for(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scaled_product(double factor, std::span<const double> a, std::span<const double> b,
                           std::span<double> out) {
  active().scaled_product(factor, a.data(), b.data(), out.data(), a.size());
}
inline double weighted_squared_deviation(std::span<const double> c, std::span<const double> w,
                                         double center) {
  return active().weighted_squared_deviation(c.data(), w.data(), center, c.size());
}

}  // namespace grafield::simd
