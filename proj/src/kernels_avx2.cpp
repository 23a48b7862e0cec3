#include <immintrin.h>

#include "srgan/kernels.hpp"

// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma;
// callers must check avx2_supported() (the dispatcher does).

namespace sr::kernels::avx2 {

namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

// even-index elements of x[0..15] packed into one vector
inline __m256 load_even16(const float* x) {
  __m256 a = _mm256_loadu_ps(x);
  __m256 b = _mm256_loadu_ps(x + 8);
  __m256 ev = _mm256_shuffle_ps(a, b, _MM_SHUFFLE(2, 0, 2, 0));
  return _mm256_castpd_ps(
      _mm256_permute4x64_pd(_mm256_castps_pd(ev), _MM_SHUFFLE(3, 1, 2, 0)));
}

}  // namespace

void axpy(size_t n, float a, const float* x, float* y) {
  __m256 av = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 yv = _mm256_loadu_ps(y + i);
    yv = _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), yv);
    _mm256_storeu_ps(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_s2(size_t n, float a, const float* x, float* y) {
  __m256 av = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 xv = load_even16(x + 2 * i);
    __m256 yv = _mm256_loadu_ps(y + i);
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, xv, yv));
  }
  for (; i < n; ++i) y[i] += a * x[2 * i];
}

void scatter_axpy_s2(size_t n, float a, const float* x, float* y) {
  __m256 av = _mm256_set1_ps(a);
  __m256 zero = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_mul_ps(av, _mm256_loadu_ps(x + i));
    __m256 lo = _mm256_unpacklo_ps(v, zero);  // v0 0 v1 0 | v4 0 v5 0
    __m256 hi = _mm256_unpackhi_ps(v, zero);  // v2 0 v3 0 | v6 0 v7 0
    __m256 first = _mm256_permute2f128_ps(lo, hi, 0x20);
    __m256 second = _mm256_permute2f128_ps(lo, hi, 0x31);
    _mm256_storeu_ps(y + 2 * i, _mm256_add_ps(_mm256_loadu_ps(y + 2 * i), first));
    _mm256_storeu_ps(y + 2 * i + 8,
                     _mm256_add_ps(_mm256_loadu_ps(y + 2 * i + 8), second));
  }
  for (; i < n; ++i) y[2 * i] += a * x[i];
}

float dot(size_t n, const float* x, const float* y) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc);
  float r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

float dot_s2(size_t n, const float* x, const float* y) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    acc = _mm256_fmadd_ps(load_even16(x + 2 * i), _mm256_loadu_ps(y + i), acc);
  float r = hsum(acc);
  for (; i < n; ++i) r += x[2 * i] * y[i];
  return r;
}

void add(size_t n, const float* x, const float* y, float* out) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i,
                     _mm256_add_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void add_inplace(size_t n, const float* x, float* y) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i,
                     _mm256_add_ps(_mm256_loadu_ps(y + i), _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) y[i] += x[i];
}

void affine(size_t n, float a, float b, const float* x, float* y) {
  __m256 av = _mm256_set1_ps(a);
  __m256 bv = _mm256_set1_ps(b);
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), bv));
  for (; i < n; ++i) y[i] = a * x[i] + b;
}

void lincomb2(size_t n, float a, const float* p, float b, const float* q,
              float c, float* out) {
  __m256 av = _mm256_set1_ps(a);
  __m256 bv = _mm256_set1_ps(b);
  __m256 cv = _mm256_set1_ps(c);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 r = _mm256_fmadd_ps(av, _mm256_loadu_ps(p + i), cv);
    r = _mm256_fmadd_ps(bv, _mm256_loadu_ps(q + i), r);
    _mm256_storeu_ps(out + i, r);
  }
  for (; i < n; ++i) out[i] = a * p[i] + b * q[i] + c;
}

float sum(size_t n, const float* x) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
  float r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

float sumsq_diff(size_t n, const float* x, float mean) {
  __m256 mv = _mm256_set1_ps(mean);
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 d = _mm256_sub_ps(_mm256_loadu_ps(x + i), mv);
    acc = _mm256_fmadd_ps(d, d, acc);
  }
  float r = hsum(acc);
  for (; i < n; ++i) {
    float d = x[i] - mean;
    r += d * d;
  }
  return r;
}

float sumsq_diff_pair(size_t n, const float* x, const float* y) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 d = _mm256_sub_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i));
    acc = _mm256_fmadd_ps(d, d, acc);
  }
  float r = hsum(acc);
  for (; i < n; ++i) {
    float d = x[i] - y[i];
    r += d * d;
  }
  return r;
}

void scaled_diff(size_t n, float s, const float* x, const float* y,
                 float* out) {
  __m256 sv = _mm256_set1_ps(s);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 d = _mm256_sub_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i));
    _mm256_storeu_ps(out + i, _mm256_mul_ps(sv, d));
  }
  for (; i < n; ++i) out[i] = s * (x[i] - y[i]);
}

void leaky_fwd(size_t n, float alpha, const float* x, float* y) {
  __m256 av = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 xv = _mm256_loadu_ps(x + i);
    _mm256_storeu_ps(y + i, _mm256_max_ps(xv, _mm256_mul_ps(av, xv)));
  }
  for (; i < n; ++i) {
    float ax = alpha * x[i];
    y[i] = x[i] > ax ? x[i] : ax;
  }
}

void leaky_bwd(size_t n, float alpha, const float* x, const float* g,
               float* gx) {
  __m256 av = _mm256_set1_ps(alpha);
  __m256 ones = _mm256_set1_ps(1.0f);
  __m256 zero = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(x + i), zero, _CMP_GT_OQ);
    __m256 factor = _mm256_blendv_ps(av, ones, mask);
    __m256 gv = _mm256_loadu_ps(gx + i);
    gv = _mm256_fmadd_ps(_mm256_loadu_ps(g + i), factor, gv);
    _mm256_storeu_ps(gx + i, gv);
  }
  for (; i < n; ++i) gx[i] += g[i] * (x[i] > 0 ? 1.0f : alpha);
}

float neg_dot(size_t n, const float* x, const float* g) {
  __m256 zero = _mm256_setzero_ps();
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 xv = _mm256_loadu_ps(x + i);
    __m256 mask = _mm256_cmp_ps(xv, zero, _CMP_LT_OQ);
    __m256 prod = _mm256_and_ps(_mm256_mul_ps(xv, _mm256_loadu_ps(g + i)), mask);
    acc = _mm256_add_ps(acc, prod);
  }
  float r = hsum(acc);
  for (; i < n; ++i)
    if (x[i] < 0) r += x[i] * g[i];
  return r;
}

}  // namespace sr::kernels::avx2
