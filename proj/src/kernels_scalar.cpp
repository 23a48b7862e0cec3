#include "srgan/kernels.hpp"

// Reference kernels. Plain loops, one statement per element; these define
// the semantics the SIMD variants are tested against.

namespace sr::kernels {

namespace {

template <typename T>
void axpy_impl(size_t n, T a, const T* x, T* y) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename T>
void axpy_s2_impl(size_t n, T a, const T* x, T* y) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[2 * i];
}

template <typename T>
void scatter_axpy_s2_impl(size_t n, T a, const T* x, T* y) {
  for (size_t i = 0; i < n; ++i) y[2 * i] += a * x[i];
}

template <typename T>
T dot_impl(size_t n, const T* x, const T* y) {
  T acc = 0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

template <typename T>
T dot_s2_impl(size_t n, const T* x, const T* y) {
  T acc = 0;
  for (size_t i = 0; i < n; ++i) acc += x[2 * i] * y[i];
  return acc;
}

template <typename T>
void add_impl(size_t n, const T* x, const T* y, T* out) {
  for (size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

template <typename T>
void add_inplace_impl(size_t n, const T* x, T* y) {
  for (size_t i = 0; i < n; ++i) y[i] += x[i];
}

template <typename T>
void affine_impl(size_t n, T a, T b, const T* x, T* y) {
  for (size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
}

template <typename T>
void lincomb2_impl(size_t n, T a, const T* p, T b, const T* q, T c, T* out) {
  for (size_t i = 0; i < n; ++i) out[i] = a * p[i] + b * q[i] + c;
}

template <typename T>
T sum_impl(size_t n, const T* x) {
  T acc = 0;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

template <typename T>
T sumsq_diff_impl(size_t n, const T* x, T mean) {
  T acc = 0;
  for (size_t i = 0; i < n; ++i) {
    T d = x[i] - mean;
    acc += d * d;
  }
  return acc;
}

template <typename T>
T sumsq_diff_pair_impl(size_t n, const T* x, const T* y) {
  T acc = 0;
  for (size_t i = 0; i < n; ++i) {
    T d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

template <typename T>
void scaled_diff_impl(size_t n, T s, const T* x, const T* y, T* out) {
  for (size_t i = 0; i < n; ++i) out[i] = s * (x[i] - y[i]);
}

template <typename T>
void leaky_fwd_impl(size_t n, T alpha, const T* x, T* y) {
  for (size_t i = 0; i < n; ++i) {
    T ax = alpha * x[i];
    y[i] = x[i] > ax ? x[i] : ax;
  }
}

template <typename T>
void leaky_bwd_impl(size_t n, T alpha, const T* x, const T* g, T* gx) {
  for (size_t i = 0; i < n; ++i) gx[i] += g[i] * (x[i] > 0 ? T(1) : alpha);
}

template <typename T>
T neg_dot_impl(size_t n, const T* x, const T* g) {
  T acc = 0;
  for (size_t i = 0; i < n; ++i)
    if (x[i] < 0) acc += x[i] * g[i];
  return acc;
}

}  // namespace

namespace scalar {
void axpy(size_t n, float a, const float* x, float* y) { axpy_impl(n, a, x, y); }
void axpy_s2(size_t n, float a, const float* x, float* y) { axpy_s2_impl(n, a, x, y); }
void scatter_axpy_s2(size_t n, float a, const float* x, float* y) { scatter_axpy_s2_impl(n, a, x, y); }
float dot(size_t n, const float* x, const float* y) { return dot_impl(n, x, y); }
float dot_s2(size_t n, const float* x, const float* y) { return dot_s2_impl(n, x, y); }
void add(size_t n, const float* x, const float* y, float* out) { add_impl(n, x, y, out); }
void add_inplace(size_t n, const float* x, float* y) { add_inplace_impl(n, x, y); }
void affine(size_t n, float a, float b, const float* x, float* y) { affine_impl(n, a, b, x, y); }
void lincomb2(size_t n, float a, const float* p, float b, const float* q, float c, float* out) { lincomb2_impl(n, a, p, b, q, c, out); }
float sum(size_t n, const float* x) { return sum_impl(n, x); }
float sumsq_diff(size_t n, const float* x, float mean) { return sumsq_diff_impl(n, x, mean); }
float sumsq_diff_pair(size_t n, const float* x, const float* y) { return sumsq_diff_pair_impl(n, x, y); }
void scaled_diff(size_t n, float s, const float* x, const float* y, float* out) { scaled_diff_impl(n, s, x, y, out); }
void leaky_fwd(size_t n, float alpha, const float* x, float* y) { leaky_fwd_impl(n, alpha, x, y); }
void leaky_bwd(size_t n, float alpha, const float* x, const float* g, float* gx) { leaky_bwd_impl(n, alpha, x, g, gx); }
float neg_dot(size_t n, const float* x, const float* g) { return neg_dot_impl(n, x, g); }
}  // namespace scalar

// double entry points go straight to the reference implementations
void axpy(size_t n, double a, const double* x, double* y) { axpy_impl(n, a, x, y); }
void axpy_s2(size_t n, double a, const double* x, double* y) { axpy_s2_impl(n, a, x, y); }
void scatter_axpy_s2(size_t n, double a, const double* x, double* y) { scatter_axpy_s2_impl(n, a, x, y); }
double dot(size_t n, const double* x, const double* y) { return dot_impl(n, x, y); }
double dot_s2(size_t n, const double* x, const double* y) { return dot_s2_impl(n, x, y); }
void add(size_t n, const double* x, const double* y, double* out) { add_impl(n, x, y, out); }
void add_inplace(size_t n, const double* x, double* y) { add_inplace_impl(n, x, y); }
void affine(size_t n, double a, double b, const double* x, double* y) { affine_impl(n, a, b, x, y); }
void lincomb2(size_t n, double a, const double* p, double b, const double* q, double c, double* out) { lincomb2_impl(n, a, p, b, q, c, out); }
double sum(size_t n, const double* x) { return sum_impl(n, x); }
double sumsq_diff(size_t n, const double* x, double mean) { return sumsq_diff_impl(n, x, mean); }
double sumsq_diff_pair(size_t n, const double* x, const double* y) { return sumsq_diff_pair_impl(n, x, y); }
void scaled_diff(size_t n, double s, const double* x, const double* y, double* out) { scaled_diff_impl(n, s, x, y, out); }
void leaky_fwd(size_t n, double alpha, const double* x, double* y) { leaky_fwd_impl(n, alpha, x, y); }
void leaky_bwd(size_t n, double alpha, const double* x, const double* g, double* gx) { leaky_bwd_impl(n, alpha, x, g, gx); }
double neg_dot(size_t n, const double* x, const double* g) { return neg_dot_impl(n, x, g); }

}  // namespace sr::kernels
