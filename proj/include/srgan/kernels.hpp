#pragma once

#include <cstddef>

// Inner-loop arithmetic kernels. Every float kernel exists twice: a scalar
// reference implementation (kernels::scalar) and an AVX2 variant
// (kernels::avx2, compiled with -mavx2 -mfma). The top-level sr::kernels
// functions dispatch at runtime on CPU capability; SR_KERNELS=scalar|avx2
// in the environment forces a path. Double overloads are scalar-only and are
// used by the 64-bit gradient-check instantiations.
//
// The AVX2 variants are equivalence-tested against the scalar references;
// they may differ in final-bit rounding (FMA, reassociated reductions).

namespace sr::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
bool avx2_supported();

namespace scalar {
void axpy(size_t n, float a, const float* x, float* y);
void axpy_s2(size_t n, float a, const float* x, float* y);
void scatter_axpy_s2(size_t n, float a, const float* x, float* y);
float dot(size_t n, const float* x, const float* y);
float dot_s2(size_t n, const float* x, const float* y);
void add(size_t n, const float* x, const float* y, float* out);
void add_inplace(size_t n, const float* x, float* y);
void affine(size_t n, float a, float b, const float* x, float* y);
void lincomb2(size_t n, float a, const float* p, float b, const float* q,
              float c, float* out);
float sum(size_t n, const float* x);
float sumsq_diff(size_t n, const float* x, float mean);
float sumsq_diff_pair(size_t n, const float* x, const float* y);
void scaled_diff(size_t n, float s, const float* x, const float* y,
                 float* out);
void leaky_fwd(size_t n, float alpha, const float* x, float* y);
void leaky_bwd(size_t n, float alpha, const float* x, const float* g,
               float* gx);
float neg_dot(size_t n, const float* x, const float* g);
}  // namespace scalar

namespace avx2 {
void axpy(size_t n, float a, const float* x, float* y);
void axpy_s2(size_t n, float a, const float* x, float* y);
void scatter_axpy_s2(size_t n, float a, const float* x, float* y);
float dot(size_t n, const float* x, const float* y);
float dot_s2(size_t n, const float* x, const float* y);
void add(size_t n, const float* x, const float* y, float* out);
void add_inplace(size_t n, const float* x, float* y);
void affine(size_t n, float a, float b, const float* x, float* y);
void lincomb2(size_t n, float a, const float* p, float b, const float* q,
              float c, float* out);
float sum(size_t n, const float* x);
float sumsq_diff(size_t n, const float* x, float mean);
float sumsq_diff_pair(size_t n, const float* x, const float* y);
void scaled_diff(size_t n, float s, const float* x, const float* y,
                 float* out);
void leaky_fwd(size_t n, float alpha, const float* x, float* y);
void leaky_bwd(size_t n, float alpha, const float* x, const float* g,
               float* gx);
float neg_dot(size_t n, const float* x, const float* g);
}  // namespace avx2

// dispatched float entry points
void axpy(size_t n, float a, const float* x, float* y);
void axpy_s2(size_t n, float a, const float* x, float* y);
void scatter_axpy_s2(size_t n, float a, const float* x, float* y);
float dot(size_t n, const float* x, const float* y);
float dot_s2(size_t n, const float* x, const float* y);
void add(size_t n, const float* x, const float* y, float* out);
void add_inplace(size_t n, const float* x, float* y);
void affine(size_t n, float a, float b, const float* x, float* y);
void lincomb2(size_t n, float a, const float* p, float b, const float* q,
              float c, float* out);
float sum(size_t n, const float* x);
float sumsq_diff(size_t n, const float* x, float mean);
float sumsq_diff_pair(size_t n, const float* x, const float* y);
void scaled_diff(size_t n, float s, const float* x, const float* y,
                 float* out);
void leaky_fwd(size_t n, float alpha, const float* x, float* y);
void leaky_bwd(size_t n, float alpha, const float* x, const float* g,
               float* gx);
float neg_dot(size_t n, const float* x, const float* g);

// double overloads (scalar; the 64-bit path exists for gradient checking,
// not throughput)
void axpy(size_t n, double a, const double* x, double* y);
void axpy_s2(size_t n, double a, const double* x, double* y);
void scatter_axpy_s2(size_t n, double a, const double* x, double* y);
double dot(size_t n, const double* x, const double* y);
double dot_s2(size_t n, const double* x, const double* y);
void add(size_t n, const double* x, const double* y, double* out);
void add_inplace(size_t n, const double* x, double* y);
void affine(size_t n, double a, double b, const double* x, double* y);
void lincomb2(size_t n, double a, const double* p, double b, const double* q,
              double c, double* out);
double sum(size_t n, const double* x);
double sumsq_diff(size_t n, const double* x, double mean);
double sumsq_diff_pair(size_t n, const double* x, const double* y);
void scaled_diff(size_t n, double s, const double* x, const double* y,
                 double* out);
void leaky_fwd(size_t n, double alpha, const double* x, double* y);
void leaky_bwd(size_t n, double alpha, const double* x, const double* g,
               double* gx);
double neg_dot(size_t n, const double* x, const double* g);

}  // namespace sr::kernels
