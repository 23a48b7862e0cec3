#include <cstdlib>
#include <cstring>

#include "srgan/kernels.hpp"

namespace sr::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Isa select_isa() {
  if (const char* env = std::getenv("SR_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Isa::Avx2;
  }
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

const Isa g_isa = select_isa();

}  // namespace

Isa active_isa() { return g_isa; }

#define SR_DISPATCH(call) \
  (g_isa == Isa::Avx2 ? avx2::call : scalar::call)

void axpy(size_t n, float a, const float* x, float* y) { SR_DISPATCH(axpy(n, a, x, y)); }
void axpy_s2(size_t n, float a, const float* x, float* y) { SR_DISPATCH(axpy_s2(n, a, x, y)); }
void scatter_axpy_s2(size_t n, float a, const float* x, float* y) { SR_DISPATCH(scatter_axpy_s2(n, a, x, y)); }
float dot(size_t n, const float* x, const float* y) { return SR_DISPATCH(dot(n, x, y)); }
float dot_s2(size_t n, const float* x, const float* y) { return SR_DISPATCH(dot_s2(n, x, y)); }
void add(size_t n, const float* x, const float* y, float* out) { SR_DISPATCH(add(n, x, y, out)); }
void add_inplace(size_t n, const float* x, float* y) { SR_DISPATCH(add_inplace(n, x, y)); }
void affine(size_t n, float a, float b, const float* x, float* y) { SR_DISPATCH(affine(n, a, b, x, y)); }
void lincomb2(size_t n, float a, const float* p, float b, const float* q, float c, float* out) { SR_DISPATCH(lincomb2(n, a, p, b, q, c, out)); }
float sum(size_t n, const float* x) { return SR_DISPATCH(sum(n, x)); }
float sumsq_diff(size_t n, const float* x, float mean) { return SR_DISPATCH(sumsq_diff(n, x, mean)); }
float sumsq_diff_pair(size_t n, const float* x, const float* y) { return SR_DISPATCH(sumsq_diff_pair(n, x, y)); }
void scaled_diff(size_t n, float s, const float* x, const float* y, float* out) { SR_DISPATCH(scaled_diff(n, s, x, y, out)); }
void leaky_fwd(size_t n, float alpha, const float* x, float* y) { SR_DISPATCH(leaky_fwd(n, alpha, x, y)); }
void leaky_bwd(size_t n, float alpha, const float* x, const float* g, float* gx) { SR_DISPATCH(leaky_bwd(n, alpha, x, g, gx)); }
float neg_dot(size_t n, const float* x, const float* g) { return SR_DISPATCH(neg_dot(n, x, g)); }

#undef SR_DISPATCH

}  // namespace sr::kernels
