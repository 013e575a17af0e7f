#include <cmath>
#include <cstddef>

#include "coattn/kernels.hpp"

// Reference kernels. Plain loops in index order; the SIMD backends are
// checked against these in the equivalence tests.

namespace coattn::kern {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double max_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scalar(double* out, const double* a, const double* b,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_scalar(double* out, const double* a, const double* b,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_scalar(double* out, const double* a, const double* b,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_acc_scalar(double* out, const double* a, const double* b,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void scale_scalar(double* out, const double* a, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * c;
}

void adam_update_scalar(double* p, double* m, double* v, const double* g,
                        std::size_t n, double b1, double b2, double c1,
                        double c2, double lr, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    double gi = g[i];
    m[i] = b1 * m[i] + (1.0 - b1) * gi;
    v[i] = b2 * v[i] + (1.0 - b2) * (gi * gi);
    double mhat = m[i] * c1;
    double vhat = v[i] * c2;
    p[i] -= lr * (mhat / (std::sqrt(vhat) + eps));
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {
      "scalar",     dot_scalar, sum_scalar,   max_scalar,
      axpy_scalar,  add_scalar, sub_scalar,   mul_scalar,
      mul_acc_scalar, scale_scalar, adam_update_scalar,
  };
  return k;
}

}  // namespace coattn::kern
