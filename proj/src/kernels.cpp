#include "coattn/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace coattn::kern {

bool avx2_supported() {
#if defined(COATTN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const Kernels& resolve() {
  const char* force = std::getenv("COATTN_SIMD");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return scalar_kernels();
#if defined(COATTN_HAVE_AVX2)
    if (std::strcmp(force, "avx2") == 0 && avx2_supported())
      return avx2_kernels();
#endif
  }
#if defined(COATTN_HAVE_AVX2)
  if (avx2_supported()) return avx2_kernels();
#endif
  return scalar_kernels();
}

}  // namespace

const Kernels& active() {
  static const Kernels& k = resolve();
  return k;
}

void matvec(double* y, const double* a, const double* x, std::size_t rows,
            std::size_t cols) {
  const Kernels& k = active();
  for (std::size_t r = 0; r < rows; ++r) y[r] = k.dot(a + r * cols, x, cols);
}

void matvec_t(double* y, const double* a, const double* x, std::size_t rows,
              std::size_t cols) {
  const Kernels& k = active();
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) k.axpy(y, x[r], a + r * cols, cols);
}

void ger_acc(double* a, const double* x, const double* y, std::size_t rows,
             std::size_t cols) {
  const Kernels& k = active();
  for (std::size_t r = 0; r < rows; ++r) k.axpy(a + r * cols, x[r], y, cols);
}

}  // namespace coattn::kern
