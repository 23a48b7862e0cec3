#pragma once

#include <cmath>

#include "srgan/models.hpp"
#include "srgan/tensor.hpp"

// Loss terms and their analytic gradients w.r.t. the generated image.
// Spatial sums include the channel axis; batch dimension is averaged, except
// for the adversarial generator term which sums over samples (switchable to
// a mean via LossSpec::adv_mean).

namespace sr {

enum class ContentLossKind { Mse, Feature };

struct LossSpec {
  ContentLossKind content = ContentLossKind::Mse;
  int feature_tap_block = 5;
  int feature_tap_conv = 4;
  double adversarial_weight = 1e-3;
  double tv_weight = 0.0;
  double feature_rescale = 1.0 / 12.75;
  bool adv_mean = false;

  void validate() const {
    if (adversarial_weight < 0 || tv_weight < 0 || feature_rescale < 0)
      fail(ErrorCode::InvalidArgument, "loss weights must be non-negative");
  }
};

template <typename T>
struct ScalarGrad {
  T value = 0;
  Tensor<T> grad;
};

// (1/(N*H*W)) * sum over n,c,y,x of (hr - sr)^2
template <typename T>
ScalarGrad<T> mse_content_loss(const Tensor<T>& sr, const Tensor<T>& hr) {
  require_same_shape(sr, hr, "mse_content_loss");
  T denom = static_cast<T>(static_cast<size_t>(sr.shape.n) * sr.shape.h *
                           sr.shape.w);
  ScalarGrad<T> out;
  out.value = kernels::sumsq_diff_pair(sr.count(), sr.ptr(), hr.ptr()) / denom;
  out.grad = Tensor<T>(sr.shape);
  kernels::scaled_diff(sr.count(), T(2) / denom, sr.ptr(), hr.ptr(),
                       out.grad.ptr());
  return out;
}

// squared distance between rescaled feature maps; gradient flows through the
// extractor to sr only
template <typename T>
ScalarGrad<T> feature_content_loss(const Tensor<T>& sr, const Tensor<T>& hr,
                                   FeatureExtractor<T>& extractor, T rescale) {
  require_same_shape(sr, hr, "feature_content_loss");
  Tensor<T> fh = extractor.forward(hr, /*cache=*/false);
  Tensor<T> fs = extractor.forward(sr, /*cache=*/true);
  T denom = static_cast<T>(static_cast<size_t>(fs.shape.n) * fs.shape.h *
                           fs.shape.w);
  T r2 = rescale * rescale;
  ScalarGrad<T> out;
  out.value = r2 * kernels::sumsq_diff_pair(fs.count(), fs.ptr(), fh.ptr()) /
              denom;
  Tensor<T> gfeat(fs.shape);
  kernels::scaled_diff(fs.count(), T(2) * r2 / denom, fs.ptr(), fh.ptr(),
                       gfeat.ptr());
  out.grad = extractor.backward_to_input(gfeat);
  return out;
}

namespace detail {

template <typename T>
void check_probability(const Tensor<T>& p, const char* where) {
  for (T v : p.data)
    if (!(v >= T(0) && v <= T(1)))
      fail(ErrorCode::Domain, std::string(where) + ": probability " +
                                  std::to_string(static_cast<double>(v)) +
                                  " outside [0,1]");
}

template <typename T>
T softplus(T x) {
  // log(1 + e^x) without overflow
  T m = x > T(0) ? x : T(0);
  return m + std::log1p(std::exp(-std::fabs(x)));
}

constexpr double kProbClamp = 1e-7;

}  // namespace detail

// sum over samples of -log D(G(I^LR)); probabilities clamped away from 0
template <typename T>
ScalarGrad<T> adversarial_gen_loss(const Tensor<T>& d_probs, bool mean = false) {
  detail::check_probability(d_probs, "adversarial_gen_loss");
  T scale = mean ? T(1) / static_cast<T>(d_probs.count()) : T(1);
  ScalarGrad<T> out;
  out.grad = Tensor<T>(d_probs.shape);
  for (size_t i = 0; i < d_probs.count(); ++i) {
    T p = std::max(d_probs.data[i], static_cast<T>(detail::kProbClamp));
    out.value += -std::log(p) * scale;
    out.grad.data[i] = -scale / p;
  }
  return out;
}

// same objective computed from pre-sigmoid logits; gradient w.r.t. logits
template <typename T>
ScalarGrad<T> adversarial_gen_loss_logits(const Tensor<T>& logits,
                                          bool mean = false) {
  T scale = mean ? T(1) / static_cast<T>(logits.count()) : T(1);
  ScalarGrad<T> out;
  out.grad = Tensor<T>(logits.shape);
  for (size_t i = 0; i < logits.count(); ++i) {
    T z = logits.data[i];
    out.value += detail::softplus(-z) * scale;  // -log sigmoid(z)
    T s = T(1) / (T(1) + std::exp(-z));
    out.grad.data[i] = (s - T(1)) * scale;
  }
  return out;
}

template <typename T>
struct DiscLoss {
  T value = 0;
  Tensor<T> grad_real, grad_fake;
};

// -mean log d_real - mean log(1 - d_fake)
template <typename T>
DiscLoss<T> discriminator_loss(const Tensor<T>& d_real,
                               const Tensor<T>& d_fake) {
  detail::check_probability(d_real, "discriminator_loss(real)");
  detail::check_probability(d_fake, "discriminator_loss(fake)");
  DiscLoss<T> out;
  out.grad_real = Tensor<T>(d_real.shape);
  out.grad_fake = Tensor<T>(d_fake.shape);
  T nr = static_cast<T>(d_real.count());
  T nf = static_cast<T>(d_fake.count());
  for (size_t i = 0; i < d_real.count(); ++i) {
    T p = std::max(d_real.data[i], static_cast<T>(detail::kProbClamp));
    out.value += -std::log(p) / nr;
    out.grad_real.data[i] = -T(1) / (p * nr);
  }
  for (size_t i = 0; i < d_fake.count(); ++i) {
    T q = std::max(T(1) - d_fake.data[i], static_cast<T>(detail::kProbClamp));
    out.value += -std::log(q) / nf;
    out.grad_fake.data[i] = T(1) / (q * nf);
  }
  return out;
}

template <typename T>
DiscLoss<T> discriminator_loss_logits(const Tensor<T>& z_real,
                                      const Tensor<T>& z_fake) {
  DiscLoss<T> out;
  out.grad_real = Tensor<T>(z_real.shape);
  out.grad_fake = Tensor<T>(z_fake.shape);
  T nr = static_cast<T>(z_real.count());
  T nf = static_cast<T>(z_fake.count());
  for (size_t i = 0; i < z_real.count(); ++i) {
    T z = z_real.data[i];
    out.value += detail::softplus(-z) / nr;
    T s = T(1) / (T(1) + std::exp(-z));
    out.grad_real.data[i] = (s - T(1)) / nr;
  }
  for (size_t i = 0; i < z_fake.count(); ++i) {
    T z = z_fake.data[i];
    out.value += detail::softplus(z) / nf;  // -log(1 - sigmoid(z))
    T s = T(1) / (T(1) + std::exp(-z));
    out.grad_fake.data[i] = s / nf;
  }
  return out;
}

// isotropic total variation with forward differences and epsilon smoothing,
// averaged over the batch
template <typename T>
ScalarGrad<T> total_variation_loss(const Tensor<T>& x) {
  if (x.shape.h < 2 || x.shape.w < 2)
    fail(ErrorCode::ShapeMismatch, "total_variation_loss needs H,W >= 2");
  const T eps = static_cast<T>(1e-8);
  const T inv_n = T(1) / static_cast<T>(x.shape.n);
  ScalarGrad<T> out;
  out.grad = Tensor<T>(x.shape);
  const int h = x.shape.h, w = x.shape.w;
  for (int n = 0; n < x.shape.n; ++n)
    for (int c = 0; c < x.shape.c; ++c) {
      const T* p = x.plane(n, c);
      T* g = out.grad.plane(n, c);
      for (int y = 0; y < h; ++y)
        for (int z = 0; z < w; ++z) {
          size_t i = static_cast<size_t>(y) * w + z;
          T dx = (z + 1 < w) ? p[i + 1] - p[i] : T(0);
          T dy = (y + 1 < h) ? p[i + w] - p[i] : T(0);
          T s = std::sqrt(dx * dx + dy * dy + eps * eps);
          out.value += s * inv_n;
          T gx = inv_n * dx / s;
          T gy = inv_n * dy / s;
          if (z + 1 < w) {
            g[i + 1] += gx;
            g[i] -= gx;
          }
          if (y + 1 < h) {
            g[i + w] += gy;
            g[i] -= gy;
          }
        }
    }
  return out;
}

template <typename T>
struct LossReport {
  T content = 0, adversarial = 0, tv = 0, total = 0;
  // d(total)/d(sr), combining every term whose gradient is available
  Tensor<T> grad_sr;
  Tensor<T> content_grad, tv_grad;
  Tensor<T> adv_grad_probs;  // d(adversarial)/d(d_fake)
};

// Weighted combination: total = content + w_adv * adversarial + w_tv * tv.
// The adversarial term's gradient w.r.t. sr requires backpropagation through
// the discriminator; callers that have it supply `adv_grad_sr` and it is
// folded into grad_sr with weight w_adv.
template <typename T>
LossReport<T> perceptual_loss(const Tensor<T>& sr, const Tensor<T>& hr,
                              const Tensor<T>& d_fake_probs,
                              const LossSpec& spec,
                              FeatureExtractor<T>* extractor = nullptr,
                              const Tensor<T>* adv_grad_sr = nullptr) {
  spec.validate();
  if (spec.content == ContentLossKind::Feature && extractor == nullptr)
    fail(ErrorCode::InvalidArgument,
         "feature content loss requires an extractor");

  LossReport<T> rep;
  ScalarGrad<T> content =
      spec.content == ContentLossKind::Mse
          ? mse_content_loss(sr, hr)
          : feature_content_loss(sr, hr, *extractor,
                                 static_cast<T>(spec.feature_rescale));
  rep.content = content.value;
  rep.content_grad = std::move(content.grad);

  const T w_adv = static_cast<T>(spec.adversarial_weight);
  const T w_tv = static_cast<T>(spec.tv_weight);

  if (d_fake_probs.count() > 0) {
    auto adv = adversarial_gen_loss(d_fake_probs, spec.adv_mean);
    rep.adversarial = adv.value;
    rep.adv_grad_probs = std::move(adv.grad);
  }
  if (w_tv > T(0)) {
    auto tv = total_variation_loss(sr);
    rep.tv = tv.value;
    rep.tv_grad = std::move(tv.grad);
  }

  rep.total = rep.content + w_adv * rep.adversarial + w_tv * rep.tv;

  rep.grad_sr = rep.content_grad;
  if (w_tv > T(0))
    kernels::axpy(rep.grad_sr.count(), w_tv, rep.tv_grad.ptr(),
                  rep.grad_sr.ptr());
  if (adv_grad_sr != nullptr) {
    require_same_shape(*adv_grad_sr, rep.grad_sr, "perceptual_loss adv grad");
    kernels::axpy(rep.grad_sr.count(), w_adv, adv_grad_sr->ptr(),
                  rep.grad_sr.ptr());
  }
  return rep;
}

}  // namespace sr
