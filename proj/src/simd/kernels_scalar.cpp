#include "grafield/simd/kernels.hpp"

namespace grafield::simd {
namespace {

// Reference versions. Accumulation is strictly left to right so results are
// reproducible across compilers that honour -fno-fast-math.

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scaled_product_scalar(double factor, const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = factor * a[i] * b[i];
}

double weighted_squared_deviation_scalar(const double* c, const double* w, double center, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = c[i] - center;
    acc += w[i] * d * d;
  }
  return acc;
}

constexpr KernelTable kScalar{
    Isa::Scalar,         dot_scalar,           sum_scalar, squared_distance_scalar, axpy_scalar,
    scaled_product_scalar, weighted_squared_deviation_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace grafield::simd
