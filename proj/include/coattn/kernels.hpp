#pragma once

#include <cstddef>

namespace coattn::kern {

// Inner-loop kernel table. A backend is selected once per process: AVX2 when
// the CPU supports it, the scalar reference otherwise. The COATTN_SIMD
// environment variable ("scalar" or "avx2") overrides the automatic choice.
//
// Elementwise kernels (axpy, add, sub, mul, mul_acc, scale, adam_update) are
// bit-identical across backends: both sides round multiply and add
// separately, never through a fused multiply-add. Reductions (dot, sum, max)
// may reassociate under SIMD and only agree with the reference to rounding
// error.
struct Kernels {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max)(const double* x, std::size_t n);  // n >= 1

  // y += a * x
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // out = a + b
  void (*add)(double* out, const double* a, const double* b, std::size_t n);
  // out = a - b
  void (*sub)(double* out, const double* a, const double* b, std::size_t n);
  // out = a * b elementwise
  void (*mul)(double* out, const double* a, const double* b, std::size_t n);
  // out += a * b elementwise
  void (*mul_acc)(double* out, const double* a, const double* b,
                  std::size_t n);
  // out = a * c
  void (*scale)(double* out, const double* a, double c, std::size_t n);

  // One bias-corrected adaptive-moment update step per coordinate:
  //   m = b1*m + (1-b1)*g
  //   v = b2*v + (1-b2)*g*g
  //   p -= lr * (m*c1) / (sqrt(v*c2) + eps)
  // where c1 = 1/(1-b1^t) and c2 = 1/(1-b2^t) are passed in precomputed.
  void (*adam_update)(double* p, double* m, double* v, const double* g,
                      std::size_t n, double b1, double b2, double c1,
                      double c2, double lr, double eps);
};

const Kernels& scalar_kernels();
#if defined(COATTN_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif

bool avx2_supported();

// The table in use for this process. Resolved on first call.
const Kernels& active();

// Dense helpers built on the active table. Matrices are row-major.
// y = A x            (A: rows x cols, x: cols, y: rows)
void matvec(double* y, const double* a, const double* x, std::size_t rows,
            std::size_t cols);
// y = A^T x          (A: rows x cols, x: rows, y: cols)
void matvec_t(double* y, const double* a, const double* x, std::size_t rows,
              std::size_t cols);
// A += x y^T         (x: rows, y: cols)
void ger_acc(double* a, const double* x, const double* y, std::size_t rows,
             std::size_t cols);

}  // namespace coattn::kern
