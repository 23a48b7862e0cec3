#pragma once

#include <cmath>
#include <vector>

#include "srgan/error.hpp"
#include "srgan/kernels.hpp"
#include "srgan/tensor.hpp"

// Differentiable operator set. Forward/backward pairs are free functions;
// layer objects in models.hpp own the parameters and caches. Convolution is
// cross-correlation (no kernel flip) with zero padding k/2, so stride-1
// layers preserve spatial size.

namespace sr::nn {

struct ConvSpec {
  int k = 3;
  int n_in = 0;
  int n_out = 0;
  int stride = 1;

  int pad() const { return k / 2; }

  void validate() const {
    if (k < 1 || k % 2 == 0)
      fail(ErrorCode::InvalidArgument, "conv kernel size must be odd, got " +
                                           std::to_string(k));
    if (stride != 1 && stride != 2)
      fail(ErrorCode::InvalidArgument, "conv stride must be 1 or 2");
    if (n_in < 1 || n_out < 1)
      fail(ErrorCode::InvalidArgument, "conv channel counts must be positive");
  }
};

inline int conv_out_dim(int in, int k, int pad, int stride) {
  return (in + 2 * pad - k) / stride + 1;
}

template <typename T>
void check_conv_args(const Tensor<T>& x, const Tensor<T>& w, const ConvSpec& s) {
  s.validate();
  if (x.shape.c != s.n_in)
    fail(ErrorCode::ShapeMismatch,
         "conv2d input channels " + std::to_string(x.shape.c) +
             " != spec n_in " + std::to_string(s.n_in));
  Shape expect{s.n_out, s.n_in, s.k, s.k};
  if (!(w.shape == expect))
    fail(ErrorCode::ShapeMismatch,
         "conv2d weight shape " + w.shape.str() + " != " + expect.str());
}

// valid output-x range [ox0, ox1) for a given kernel column, plus the first
// input-x it reads
struct ConvXRange {
  int ox0, ox1, ix0;
};

inline ConvXRange conv_x_range(int in_w, int out_w, int kx, int pad,
                               int stride) {
  // need 0 <= ox*stride + kx - pad < in_w
  int lo = pad - kx;  // ox*stride >= lo
  int ox0 = lo <= 0 ? 0 : (lo + stride - 1) / stride;
  int hi = in_w - 1 + pad - kx;  // ox*stride <= hi
  int ox1 = hi < 0 ? 0 : std::min(out_w, hi / stride + 1);
  if (ox1 < ox0) ox1 = ox0;
  return {ox0, ox1, ox0 * stride + kx - pad};
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w,
                 const Tensor<T>& bias, const ConvSpec& s) {
  check_conv_args(x, w, s);
  if (bias.count() != static_cast<size_t>(s.n_out))
    fail(ErrorCode::ShapeMismatch, "conv2d bias count != n_out");
  const int pad = s.pad(), st = s.stride;
  const int oh = conv_out_dim(x.shape.h, s.k, pad, st);
  const int ow = conv_out_dim(x.shape.w, s.k, pad, st);
  Tensor<T> out(x.shape.n, s.n_out, oh, ow);

  for (int n = 0; n < x.shape.n; ++n) {
    for (int co = 0; co < s.n_out; ++co) {
      T* oplane = out.plane(n, co);
      std::fill(oplane, oplane + static_cast<size_t>(oh) * ow, bias.data[co]);
      for (int ci = 0; ci < s.n_in; ++ci) {
        const T* xplane = x.plane(n, ci);
        const T* wbase = w.ptr() + ((static_cast<size_t>(co) * s.n_in + ci) *
                                    s.k * s.k);
        for (int ky = 0; ky < s.k; ++ky) {
          for (int kx = 0; kx < s.k; ++kx) {
            T coeff = wbase[ky * s.k + kx];
            if (coeff == T(0)) continue;
            auto r = conv_x_range(x.shape.w, ow, kx, pad, st);
            if (r.ox1 <= r.ox0) continue;
            size_t len = static_cast<size_t>(r.ox1 - r.ox0);
            for (int oy = 0; oy < oh; ++oy) {
              int iy = oy * st + ky - pad;
              if (iy < 0 || iy >= x.shape.h) continue;
              const T* xrow = xplane + static_cast<size_t>(iy) * x.shape.w + r.ix0;
              T* orow = oplane + static_cast<size_t>(oy) * ow + r.ox0;
              if (st == 1)
                kernels::axpy(len, coeff, xrow, orow);
              else
                kernels::axpy_s2(len, coeff, xrow, orow);
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
struct ConvGrads {
  Tensor<T> x, w, b;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const Tensor<T>& w,
                             const ConvSpec& s, const Tensor<T>& grad_out) {
  check_conv_args(x, w, s);
  const int pad = s.pad(), st = s.stride;
  const int oh = conv_out_dim(x.shape.h, s.k, pad, st);
  const int ow = conv_out_dim(x.shape.w, s.k, pad, st);
  Shape oshape{x.shape.n, s.n_out, oh, ow};
  if (!(grad_out.shape == oshape))
    fail(ErrorCode::ShapeMismatch, "conv2d_backward grad shape " +
                                       grad_out.shape.str() + " != " +
                                       oshape.str());

  ConvGrads<T> g;
  g.x = Tensor<T>(x.shape);
  g.w = Tensor<T>(w.shape);
  g.b = Tensor<T>(s.n_out, 1, 1, 1);

  for (int n = 0; n < x.shape.n; ++n) {
    for (int co = 0; co < s.n_out; ++co) {
      const T* gplane = grad_out.plane(n, co);
      g.b.data[co] += kernels::sum(static_cast<size_t>(oh) * ow, gplane);
      for (int ci = 0; ci < s.n_in; ++ci) {
        const T* xplane = x.plane(n, ci);
        T* gxplane = g.x.plane(n, ci);
        size_t wbase = (static_cast<size_t>(co) * s.n_in + ci) * s.k * s.k;
        for (int ky = 0; ky < s.k; ++ky) {
          for (int kx = 0; kx < s.k; ++kx) {
            auto r = conv_x_range(x.shape.w, ow, kx, pad, st);
            if (r.ox1 <= r.ox0) continue;
            size_t len = static_cast<size_t>(r.ox1 - r.ox0);
            T coeff = w.data[wbase + ky * s.k + kx];
            T wacc = 0;
            for (int oy = 0; oy < oh; ++oy) {
              int iy = oy * st + ky - pad;
              if (iy < 0 || iy >= x.shape.h) continue;
              const T* xrow = xplane + static_cast<size_t>(iy) * x.shape.w + r.ix0;
              T* gxrow = g.x.plane(n, ci) + static_cast<size_t>(iy) * x.shape.w + r.ix0;
              const T* grow = gplane + static_cast<size_t>(oy) * ow + r.ox0;
              if (st == 1) {
                wacc += kernels::dot(len, xrow, grow);
                kernels::axpy(len, coeff, grow, gxrow);
              } else {
                wacc += kernels::dot_s2(len, xrow, grow);
                kernels::scatter_axpy_s2(len, coeff, grow, gxrow);
              }
            }
            g.w.data[wbase + ky * s.k + kx] += wacc;
          }
        }
        (void)gxplane;
      }
    }
  }
  return g;
}

// --- rectifiers ---

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& x, T alpha) {
  if (!(alpha > T(0) && alpha < T(1)))
    fail(ErrorCode::InvalidArgument, "leaky_relu alpha must be in (0,1)");
  Tensor<T> y(x.shape);
  kernels::leaky_fwd(x.count(), alpha, x.ptr(), y.ptr());
  return y;
}

template <typename T>
Tensor<T> leaky_relu_backward(const Tensor<T>& x, T alpha,
                              const Tensor<T>& grad_out) {
  require_same_shape(x, grad_out, "leaky_relu_backward");
  Tensor<T> gx(x.shape);
  kernels::leaky_bwd(x.count(), alpha, x.ptr(), grad_out.ptr(), gx.ptr());
  return gx;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> y(x.shape);
  kernels::leaky_fwd(x.count(), T(0), x.ptr(), y.ptr());
  return y;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& x, const Tensor<T>& grad_out) {
  require_same_shape(x, grad_out, "relu_backward");
  Tensor<T> gx(x.shape);
  kernels::leaky_bwd(x.count(), T(0), x.ptr(), grad_out.ptr(), gx.ptr());
  return gx;
}

// slope has one entry per channel, or a single shared entry
template <typename T>
Tensor<T> prelu(const Tensor<T>& x, const Tensor<T>& slope) {
  if (slope.count() != static_cast<size_t>(x.shape.c) && slope.count() != 1)
    fail(ErrorCode::ShapeMismatch,
         "prelu slope count " + std::to_string(slope.count()) +
             " != channels " + std::to_string(x.shape.c));
  Tensor<T> y(x.shape);
  size_t plane = static_cast<size_t>(x.shape.h) * x.shape.w;
  for (int n = 0; n < x.shape.n; ++n)
    for (int c = 0; c < x.shape.c; ++c) {
      T a = slope.data[slope.count() == 1 ? 0 : c];
      kernels::leaky_fwd(plane, a, x.plane(n, c), y.plane(n, c));
    }
  return y;
}

template <typename T>
struct PreluGrads {
  Tensor<T> x, slope;
};

template <typename T>
PreluGrads<T> prelu_backward(const Tensor<T>& x, const Tensor<T>& slope,
                             const Tensor<T>& grad_out) {
  require_same_shape(x, grad_out, "prelu_backward");
  PreluGrads<T> g;
  g.x = Tensor<T>(x.shape);
  g.slope = Tensor<T>(slope.shape);
  size_t plane = static_cast<size_t>(x.shape.h) * x.shape.w;
  for (int n = 0; n < x.shape.n; ++n)
    for (int c = 0; c < x.shape.c; ++c) {
      size_t si = slope.count() == 1 ? 0 : static_cast<size_t>(c);
      T a = slope.data[si];
      kernels::leaky_bwd(plane, a, x.plane(n, c), grad_out.plane(n, c),
                         g.x.plane(n, c));
      g.slope.data[si] += kernels::neg_dot(plane, x.plane(n, c),
                                           grad_out.plane(n, c));
    }
  return g;
}

// --- batch normalization ---

template <typename T>
struct BatchNormState {
  Param<T> gamma, beta;  // (C,1,1,1)
  std::vector<T> running_mean, running_var;
  T momentum = T(0.1);
  T epsilon = T(1e-5);
  bool training = true;
  bool track_running = true;

  // train-mode forward cache, consumed by backward
  Tensor<T> xhat;
  std::vector<T> inv_std;
  bool has_cache = false;

  explicit BatchNormState(int channels)
      : gamma("", Shape{channels, 1, 1, 1}),
        beta("", Shape{channels, 1, 1, 1}),
        running_mean(channels, T(0)),
        running_var(channels, T(1)) {
    gamma.value.fill(T(1));
  }

  int channels() const { return gamma.value.shape.n; }
};

template <typename T>
Tensor<T> batch_norm(const Tensor<T>& x, BatchNormState<T>& st) {
  if (x.shape.c != st.channels())
    fail(ErrorCode::ShapeMismatch, "batch_norm channels " +
                                       std::to_string(x.shape.c) + " != " +
                                       std::to_string(st.channels()));
  const size_t plane = static_cast<size_t>(x.shape.h) * x.shape.w;
  const size_t m = static_cast<size_t>(x.shape.n) * plane;  // per channel
  Tensor<T> y(x.shape);

  if (!st.training) {
    for (int c = 0; c < x.shape.c; ++c) {
      T istd = T(1) / std::sqrt(st.running_var[c] + st.epsilon);
      T a = st.gamma.value.data[c] * istd;
      T b = st.beta.value.data[c] - a * st.running_mean[c];
      for (int n = 0; n < x.shape.n; ++n)
        kernels::affine(plane, a, b, x.plane(n, c), y.plane(n, c));
    }
    return y;
  }

  if (m < 2)
    fail(ErrorCode::DegenerateBatch,
         "batch_norm train mode needs at least 2 elements per channel");

  st.xhat = Tensor<T>(x.shape);
  st.inv_std.assign(x.shape.c, T(0));
  for (int c = 0; c < x.shape.c; ++c) {
    T total = 0;
    for (int n = 0; n < x.shape.n; ++n)
      total += kernels::sum(plane, x.plane(n, c));
    T mean = total / static_cast<T>(m);
    T sq = 0;
    for (int n = 0; n < x.shape.n; ++n)
      sq += kernels::sumsq_diff(plane, x.plane(n, c), mean);
    T var = sq / static_cast<T>(m);
    T istd = T(1) / std::sqrt(var + st.epsilon);
    st.inv_std[c] = istd;
    for (int n = 0; n < x.shape.n; ++n)
      kernels::affine(plane, istd, -mean * istd, x.plane(n, c),
                      st.xhat.plane(n, c));
    T g = st.gamma.value.data[c], b = st.beta.value.data[c];
    for (int n = 0; n < x.shape.n; ++n)
      kernels::affine(plane, g, b, st.xhat.plane(n, c), y.plane(n, c));
    if (st.track_running) {
      st.running_mean[c] = (T(1) - st.momentum) * st.running_mean[c] +
                           st.momentum * mean;
      st.running_var[c] = (T(1) - st.momentum) * st.running_var[c] +
                          st.momentum * var;
    }
  }
  st.has_cache = true;
  return y;
}

// Full chain rule through the batch statistics. Requires the cache of a
// preceding train-mode forward; accumulates gamma/beta grads in the state.
template <typename T>
Tensor<T> batch_norm_backward(const Tensor<T>& grad_out,
                              BatchNormState<T>& st) {
  if (!st.has_cache)
    fail(ErrorCode::InvalidArgument,
         "batch_norm_backward without a cached train-mode forward");
  require_same_shape(grad_out, st.xhat, "batch_norm_backward");
  const auto& xhat = st.xhat;
  const size_t plane = static_cast<size_t>(xhat.shape.h) * xhat.shape.w;
  const T m = static_cast<T>(static_cast<size_t>(xhat.shape.n) * plane);
  Tensor<T> gx(xhat.shape);

  for (int c = 0; c < xhat.shape.c; ++c) {
    T sum_g = 0, sum_gx = 0;
    for (int n = 0; n < xhat.shape.n; ++n) {
      sum_g += kernels::sum(plane, grad_out.plane(n, c));
      sum_gx += kernels::dot(plane, grad_out.plane(n, c), xhat.plane(n, c));
    }
    st.gamma.grad.data[c] += sum_gx;
    st.beta.grad.data[c] += sum_g;
    T gi = st.gamma.value.data[c] * st.inv_std[c];
    T a = gi;
    T b = -gi * sum_gx / m;
    T c0 = -gi * sum_g / m;
    for (int n = 0; n < xhat.shape.n; ++n)
      kernels::lincomb2(plane, a, grad_out.plane(n, c), b, xhat.plane(n, c),
                        c0, gx.plane(n, c));
  }
  return gx;
}

// --- pixel shuffle (sub-pixel convolution rearrangement) ---

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, int u) {
  if (u < 1) fail(ErrorCode::InvalidArgument, "pixel_shuffle factor must be >= 1");
  if (x.shape.c % (u * u) != 0)
    fail(ErrorCode::ShapeMismatch,
         "pixel_shuffle needs channels divisible by " + std::to_string(u * u));
  int oc = x.shape.c / (u * u);
  Tensor<T> y(x.shape.n, oc, x.shape.h * u, x.shape.w * u);
  for (int n = 0; n < x.shape.n; ++n)
    for (int c = 0; c < oc; ++c)
      for (int dy = 0; dy < u; ++dy)
        for (int dx = 0; dx < u; ++dx) {
          const T* src = x.plane(n, c * u * u + dy * u + dx);
          for (int h = 0; h < x.shape.h; ++h) {
            const T* srow = src + static_cast<size_t>(h) * x.shape.w;
            T* drow = y.plane(n, c) +
                      static_cast<size_t>(u * h + dy) * y.shape.w + dx;
            for (int w = 0; w < x.shape.w; ++w) drow[static_cast<size_t>(w) * u] = srow[w];
          }
        }
  return y;
}

template <typename T>
Tensor<T> pixel_shuffle_backward(const Tensor<T>& grad_out, int u) {
  if (grad_out.shape.h % u != 0 || grad_out.shape.w % u != 0)
    fail(ErrorCode::ShapeMismatch, "pixel_shuffle_backward dims not divisible");
  Tensor<T> gx(grad_out.shape.n, grad_out.shape.c * u * u,
               grad_out.shape.h / u, grad_out.shape.w / u);
  for (int n = 0; n < grad_out.shape.n; ++n)
    for (int c = 0; c < grad_out.shape.c; ++c)
      for (int dy = 0; dy < u; ++dy)
        for (int dx = 0; dx < u; ++dx) {
          T* dst = gx.plane(n, c * u * u + dy * u + dx);
          for (int h = 0; h < gx.shape.h; ++h) {
            T* drow = dst + static_cast<size_t>(h) * gx.shape.w;
            const T* srow = grad_out.plane(n, c) +
                            static_cast<size_t>(u * h + dy) * grad_out.shape.w + dx;
            for (int w = 0; w < gx.shape.w; ++w) drow[w] = srow[static_cast<size_t>(w) * u];
          }
        }
  return gx;
}

// --- dense ---

// x is treated as (N, D) with D = C*H*W; w is (out, D, 1, 1), b is (out,1,1,1)
template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  size_t d = x.count() / x.shape.n;
  if (w.shape.c != static_cast<int>(d) || w.shape.h != 1 || w.shape.w != 1)
    fail(ErrorCode::ShapeMismatch,
         "dense weight " + w.shape.str() + " does not match input row size " +
             std::to_string(d));
  int out_dim = w.shape.n;
  if (b.count() != static_cast<size_t>(out_dim))
    fail(ErrorCode::ShapeMismatch, "dense bias count != out_dim");
  Tensor<T> y(x.shape.n, out_dim, 1, 1);
  for (int n = 0; n < x.shape.n; ++n) {
    const T* xrow = x.ptr() + static_cast<size_t>(n) * d;
    for (int j = 0; j < out_dim; ++j)
      y.data[static_cast<size_t>(n) * out_dim + j] =
          kernels::dot(d, xrow, w.ptr() + static_cast<size_t>(j) * d) +
          b.data[j];
  }
  return y;
}

template <typename T>
struct DenseGrads {
  Tensor<T> x, w, b;
};

template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& x, const Tensor<T>& w,
                             const Tensor<T>& grad_out) {
  size_t d = x.count() / x.shape.n;
  int out_dim = w.shape.n;
  if (grad_out.shape.n != x.shape.n || grad_out.count() != static_cast<size_t>(x.shape.n) * out_dim)
    fail(ErrorCode::ShapeMismatch, "dense_backward grad shape mismatch");
  DenseGrads<T> g;
  g.x = Tensor<T>(x.shape);
  g.w = Tensor<T>(w.shape);
  g.b = Tensor<T>(out_dim, 1, 1, 1);
  for (int n = 0; n < x.shape.n; ++n) {
    const T* xrow = x.ptr() + static_cast<size_t>(n) * d;
    T* gxrow = g.x.ptr() + static_cast<size_t>(n) * d;
    for (int j = 0; j < out_dim; ++j) {
      T go = grad_out.data[static_cast<size_t>(n) * out_dim + j];
      if (go == T(0)) continue;
      kernels::axpy(d, go, w.ptr() + static_cast<size_t>(j) * d, gxrow);
      kernels::axpy(d, go, xrow, g.w.ptr() + static_cast<size_t>(j) * d);
      g.b.data[j] += go;
    }
  }
  return g;
}

// --- sigmoid ---

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  Tensor<T> y(x.shape);
  for (size_t i = 0; i < x.count(); ++i) {
    T v = x.data[i];
    if (v >= 0) {
      y.data[i] = T(1) / (T(1) + std::exp(-v));
    } else {
      T e = std::exp(v);
      y.data[i] = e / (T(1) + e);
    }
  }
  return y;
}

template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& y, const Tensor<T>& grad_out) {
  require_same_shape(y, grad_out, "sigmoid_backward");
  Tensor<T> gx(y.shape);
  for (size_t i = 0; i < y.count(); ++i)
    gx.data[i] = grad_out.data[i] * y.data[i] * (T(1) - y.data[i]);
  return gx;
}

// --- elementwise add ---

template <typename T>
Tensor<T> elementwise_add(const Tensor<T>& x, const Tensor<T>& y) {
  require_same_shape(x, y, "elementwise_add");
  Tensor<T> out(x.shape);
  kernels::add(x.count(), x.ptr(), y.ptr(), out.ptr());
  return out;
}

// --- 2x2 max pooling, stride 2 ---

template <typename T>
struct MaxPoolResult {
  Tensor<T> y;
  std::vector<uint32_t> argmax;  // input-plane offset per output element
};

template <typename T>
MaxPoolResult<T> maxpool2x2(const Tensor<T>& x) {
  if (x.shape.h < 2 || x.shape.w < 2)
    fail(ErrorCode::ShapeMismatch, "maxpool2x2 needs spatial dims >= 2");
  int oh = x.shape.h / 2, ow = x.shape.w / 2;
  MaxPoolResult<T> r;
  r.y = Tensor<T>(x.shape.n, x.shape.c, oh, ow);
  r.argmax.resize(r.y.count());
  size_t oi = 0;
  for (int n = 0; n < x.shape.n; ++n)
    for (int c = 0; c < x.shape.c; ++c) {
      const T* p = x.plane(n, c);
      for (int y = 0; y < oh; ++y)
        for (int z = 0; z < ow; ++z) {
          uint32_t base = static_cast<uint32_t>((2 * y) * x.shape.w + 2 * z);
          uint32_t best = base;
          T bv = p[base];
          uint32_t cands[3] = {base + 1,
                               base + static_cast<uint32_t>(x.shape.w),
                               base + static_cast<uint32_t>(x.shape.w) + 1};
          for (uint32_t idx : cands)
            if (p[idx] > bv) {
              bv = p[idx];
              best = idx;
            }
          r.y.data[oi] = bv;
          r.argmax[oi] = best;
          ++oi;
        }
    }
  return r;
}

template <typename T>
Tensor<T> maxpool2x2_backward(const Shape& in_shape,
                              const std::vector<uint32_t>& argmax,
                              const Tensor<T>& grad_out) {
  Tensor<T> gx(in_shape);
  size_t plane = static_cast<size_t>(in_shape.h) * in_shape.w;
  size_t oi = 0;
  for (int n = 0; n < grad_out.shape.n; ++n)
    for (int c = 0; c < grad_out.shape.c; ++c) {
      T* gp = gx.ptr() + (static_cast<size_t>(n) * in_shape.c + c) * plane;
      size_t cnt = static_cast<size_t>(grad_out.shape.h) * grad_out.shape.w;
      const T* go = grad_out.plane(n, c);
      for (size_t i = 0; i < cnt; ++i, ++oi) gp[argmax[oi]] += go[i];
    }
  return gx;
}

}  // namespace sr::nn
