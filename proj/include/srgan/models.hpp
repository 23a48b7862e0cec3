#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "srgan/nn_ops.hpp"
#include "srgan/rng.hpp"

// Network graphs: the residual generator, the classifier discriminator and
// the frozen feature extractor. Layers own their parameters and the caches
// needed for the fixed-topology backward passes; nn_ops supplies the math.

namespace sr {

inline double prelu_gain(double slope) { return std::sqrt(2.0 / (1.0 + slope * slope)); }

// --- layers ---

template <typename T>
struct Conv2dLayer {
  nn::ConvSpec spec;
  Param<T> w, b;
  Tensor<T> cached_x;

  Conv2dLayer() = default;
  Conv2dLayer(const std::string& name, nn::ConvSpec s, double gain, Rng& rng)
      : spec(s),
        w(name + ".w", Shape{s.n_out, s.n_in, s.k, s.k}),
        b(name + ".b", Shape{s.n_out, 1, 1, 1}) {
    double stddev = gain / std::sqrt(static_cast<double>(s.n_in) * s.k * s.k);
    for (auto& v : w.value.data) v = static_cast<T>(rng.normal(0.0, stddev));
  }

  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    if (cache) cached_x = x;
    return nn::conv2d(x, w.value, b.value, spec);
  }
  Tensor<T> backward(const Tensor<T>& grad_out) {
    auto g = nn::conv2d_backward(cached_x, w.value, spec, grad_out);
    kernels::add_inplace(w.grad.count(), g.w.ptr(), w.grad.ptr());
    kernels::add_inplace(b.grad.count(), g.b.ptr(), b.grad.ptr());
    return std::move(g.x);
  }
};

template <typename T>
struct PReluLayer {
  Param<T> slope;
  Tensor<T> cached_x;

  PReluLayer() = default;
  PReluLayer(const std::string& name, int channels, bool shared, T init = T(0.25))
      : slope(name + ".a", Shape{shared ? 1 : channels, 1, 1, 1}) {
    slope.value.fill(init);
  }

  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    if (cache) cached_x = x;
    return nn::prelu(x, slope.value);
  }
  Tensor<T> backward(const Tensor<T>& grad_out) {
    auto g = nn::prelu_backward(cached_x, slope.value, grad_out);
    kernels::add_inplace(slope.grad.count(), g.slope.ptr(), slope.grad.ptr());
    return std::move(g.x);
  }
};

template <typename T>
struct BatchNormLayer {
  nn::BatchNormState<T> st;

  BatchNormLayer() : st(1) {}
  BatchNormLayer(const std::string& name, int channels) : st(channels) {
    st.gamma.name = name + ".gamma";
    st.beta.name = name + ".beta";
  }
  Tensor<T> forward(const Tensor<T>& x) { return nn::batch_norm(x, st); }
  Tensor<T> backward(const Tensor<T>& g) { return nn::batch_norm_backward(g, st); }
};

template <typename T>
struct DenseLayer {
  Param<T> w, b;
  Tensor<T> cached_x;

  DenseLayer() = default;
  DenseLayer(const std::string& name, int in_dim, int out_dim, double gain,
             Rng& rng)
      : w(name + ".w", Shape{out_dim, in_dim, 1, 1}),
        b(name + ".b", Shape{out_dim, 1, 1, 1}) {
    double stddev = gain / std::sqrt(static_cast<double>(in_dim));
    for (auto& v : w.value.data) v = static_cast<T>(rng.normal(0.0, stddev));
  }

  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    if (cache) cached_x = x;
    return nn::dense(x, w.value, b.value);
  }
  Tensor<T> backward(const Tensor<T>& grad_out) {
    auto g = nn::dense_backward(cached_x, w.value, grad_out);
    kernels::add_inplace(w.grad.count(), g.w.ptr(), w.grad.ptr());
    kernels::add_inplace(b.grad.count(), g.b.ptr(), b.grad.ptr());
    return std::move(g.x);
  }
};

// --- generator ---

struct GeneratorConfig {
  int blocks = 16;
  int width = 64;
  int upscale = 4;  // realized as one or two x2 sub-pixel stages
  bool global_skip = true;
  bool prelu_shared = false;
  // ablation toggle: apply the block's second BN after the skip sum instead
  // of before it
  bool block_sum_before_bn = false;

  int stages() const { return upscale == 4 ? 2 : 1; }

  void validate() const {
    if (blocks < 1) fail(ErrorCode::InvalidArgument, "generator needs blocks >= 1");
    if (width < 1) fail(ErrorCode::InvalidArgument, "generator needs width >= 1");
    if (upscale != 2 && upscale != 4)
      fail(ErrorCode::InvalidArgument, "generator upscale must be 2 or 4");
  }
};

template <typename T>
class Generator {
 public:
  struct ResBlock {
    Conv2dLayer<T> conv1, conv2;
    BatchNormLayer<T> bn1, bn2;
    PReluLayer<T> act;
    Tensor<T> cached_in;
    bool sum_before_bn = false;

    Tensor<T> forward(const Tensor<T>& x, bool cache) {
      if (cache) cached_in = x;
      auto t = conv1.forward(x, cache);
      t = bn1.forward(t);
      t = act.forward(t, cache);
      t = conv2.forward(t, cache);
      if (sum_before_bn) return bn2.forward(nn::elementwise_add(t, x));
      return nn::elementwise_add(bn2.forward(t), x);
    }
    Tensor<T> backward(const Tensor<T>& g) {
      Tensor<T> gt, gskip;
      if (sum_before_bn) {
        auto gs = bn2.backward(g);
        gskip = gs;
        gt = std::move(gs);
      } else {
        gskip = g;
        gt = bn2.backward(g);
      }
      auto gx = conv1.backward(bn1.backward(act.backward(conv2.backward(gt))));
      kernels::add_inplace(gx.count(), gskip.ptr(), gx.ptr());
      return gx;
    }
  };

  struct UpStage {
    Conv2dLayer<T> conv;
    PReluLayer<T> act;
  };

  Generator(const GeneratorConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg.validate();
    Rng rng(seed);
    const int w = cfg.width;
    const double pg = prelu_gain(0.25);
    head_conv_ = Conv2dLayer<T>("head.conv", {9, 3, w, 1}, pg, rng);
    head_act_ = PReluLayer<T>("head.prelu", w, cfg.prelu_shared);
    blocks_.resize(cfg.blocks);
    for (int i = 0; i < cfg.blocks; ++i) {
      std::string p = "res" + std::to_string(i);
      auto& b = blocks_[i];
      b.conv1 = Conv2dLayer<T>(p + ".conv1", {3, w, w, 1}, pg, rng);
      b.bn1 = BatchNormLayer<T>(p + ".bn1", w);
      b.act = PReluLayer<T>(p + ".prelu", w, cfg.prelu_shared);
      b.conv2 = Conv2dLayer<T>(p + ".conv2", {3, w, w, 1}, pg, rng);
      b.bn2 = BatchNormLayer<T>(p + ".bn2", w);
      b.sum_before_bn = cfg.block_sum_before_bn;
    }
    post_conv_ = Conv2dLayer<T>("post.conv", {3, w, w, 1}, pg, rng);
    post_bn_ = BatchNormLayer<T>("post.bn", w);
    stages_.resize(cfg.stages());
    for (int j = 0; j < cfg.stages(); ++j) {
      std::string p = "up" + std::to_string(j);
      stages_[j].conv = Conv2dLayer<T>(p + ".conv", {3, w, 4 * w, 1}, pg, rng);
      stages_[j].act = PReluLayer<T>(p + ".prelu", w, cfg.prelu_shared);
    }
    tail_conv_ = Conv2dLayer<T>("tail.conv", {9, w, 3, 1}, 1.0, rng);
    set_training(true);
  }

  // LR input in [0,1] -> SR output in HR range (unclamped; callers clamp at
  // the image boundary)
  Tensor<T> forward(const Tensor<T>& lr) {
    if (lr.shape.c != 3)
      fail(ErrorCode::ShapeMismatch, "generator expects 3-channel input");
    bool c = training_;
    auto a0 = head_act_.forward(head_conv_.forward(lr, c), c);
    auto h = a0;
    for (auto& b : blocks_) h = b.forward(h, c);
    auto p = post_bn_.forward(post_conv_.forward(h, c));
    auto s = cfg_.global_skip ? nn::elementwise_add(p, a0) : std::move(p);
    pre_upsample_ = s;
    auto u = std::move(s);
    for (auto& st : stages_)
      u = st.act.forward(nn::pixel_shuffle(st.conv.forward(u, c), 2), c);
    return tail_conv_.forward(u, c);
  }

  // accumulates parameter gradients; returns gradient w.r.t. the LR input
  Tensor<T> backward(const Tensor<T>& grad_out) {
    auto gu = tail_conv_.backward(grad_out);
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it)
      gu = it->conv.backward(nn::pixel_shuffle_backward(it->act.backward(gu), 2));
    auto gh = post_conv_.backward(post_bn_.backward(gu));
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
      gh = it->backward(gh);
    if (cfg_.global_skip) kernels::add_inplace(gh.count(), gu.ptr(), gh.ptr());
    return head_conv_.backward(head_act_.backward(gh));
  }

  std::vector<Param<T>*> params() {
    std::vector<Param<T>*> ps;
    ps.push_back(&head_conv_.w);
    ps.push_back(&head_conv_.b);
    ps.push_back(&head_act_.slope);
    for (auto& b : blocks_) {
      ps.push_back(&b.conv1.w);
      ps.push_back(&b.conv1.b);
      ps.push_back(&b.bn1.st.gamma);
      ps.push_back(&b.bn1.st.beta);
      ps.push_back(&b.act.slope);
      ps.push_back(&b.conv2.w);
      ps.push_back(&b.conv2.b);
      ps.push_back(&b.bn2.st.gamma);
      ps.push_back(&b.bn2.st.beta);
    }
    ps.push_back(&post_conv_.w);
    ps.push_back(&post_conv_.b);
    ps.push_back(&post_bn_.st.gamma);
    ps.push_back(&post_bn_.st.beta);
    for (auto& s : stages_) {
      ps.push_back(&s.conv.w);
      ps.push_back(&s.conv.b);
      ps.push_back(&s.act.slope);
    }
    ps.push_back(&tail_conv_.w);
    ps.push_back(&tail_conv_.b);
    return ps;
  }

  std::vector<std::pair<std::string, nn::BatchNormState<T>*>> bn_states() {
    std::vector<std::pair<std::string, nn::BatchNormState<T>*>> out;
    for (size_t i = 0; i < blocks_.size(); ++i) {
      out.emplace_back("res" + std::to_string(i) + ".bn1", &blocks_[i].bn1.st);
      out.emplace_back("res" + std::to_string(i) + ".bn2", &blocks_[i].bn2.st);
    }
    out.emplace_back("post.bn", &post_bn_.st);
    return out;
  }

  void set_training(bool t) {
    training_ = t;
    for (auto& [name, st] : bn_states()) st->training = t;
  }
  bool training() const { return training_; }

  void zero_grads() {
    for (auto* p : params()) p->zero_grad();
  }

  const GeneratorConfig& config() const { return cfg_; }
  // activation entering the upsampling stages (test probe of the global skip)
  const Tensor<T>& pre_upsample() const { return pre_upsample_; }

 private:
  GeneratorConfig cfg_;
  Conv2dLayer<T> head_conv_, post_conv_, tail_conv_;
  PReluLayer<T> head_act_;
  BatchNormLayer<T> post_bn_;
  std::vector<ResBlock> blocks_;
  std::vector<UpStage> stages_;
  Tensor<T> pre_upsample_;
  bool training_ = true;
};

// --- discriminator ---

struct DiscriminatorConfig {
  int input_size = 96;
  std::vector<int> widths{64, 64, 128, 128, 256, 256, 512, 512};
  std::vector<int> strides{1, 2, 1, 2, 1, 2, 1, 2};
  int dense_width = 1024;
  double leaky_alpha = 0.2;

  int stride_product() const {
    int p = 1;
    for (int s : strides) p *= s;
    return p;
  }

  void validate() const {
    if (widths.size() != 8 || strides.size() != 8)
      fail(ErrorCode::InvalidArgument,
           "discriminator needs exactly 8 conv widths and strides");
    for (int w : widths)
      if (w < 1) fail(ErrorCode::InvalidArgument, "non-positive conv width");
    for (int s : strides)
      if (s != 1 && s != 2)
        fail(ErrorCode::InvalidArgument, "conv strides must be 1 or 2");
    if (dense_width < 1)
      fail(ErrorCode::InvalidArgument, "dense width must be positive");
    if (!(leaky_alpha > 0.0 && leaky_alpha < 1.0))
      fail(ErrorCode::InvalidArgument, "leaky alpha must be in (0,1)");
    if (input_size % stride_product() != 0)
      fail(ErrorCode::InvalidArgument,
           "input size must be divisible by the total stride " +
               std::to_string(stride_product()));
  }
};

template <typename T>
class Discriminator {
 public:
  Discriminator(const DiscriminatorConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg.validate();
    Rng rng(seed);
    const double lg = prelu_gain(cfg.leaky_alpha);
    convs_.resize(8);
    bns_.resize(8);  // bns_[0] unused; first conv has no BN
    int in_c = 3;
    for (int i = 0; i < 8; ++i) {
      std::string p = "d.conv" + std::to_string(i);
      convs_[i] = Conv2dLayer<T>(p, {3, in_c, cfg.widths[i], cfg.strides[i]},
                                 lg, rng);
      if (i > 0)
        bns_[i] = BatchNormLayer<T>("d.bn" + std::to_string(i), cfg.widths[i]);
      in_c = cfg.widths[i];
    }
    int side = cfg.input_size / cfg.stride_product();
    feat_shape_ = Shape{0, cfg.widths.back(), side, side};
    int flat = cfg.widths.back() * side * side;
    fc1_ = DenseLayer<T>("d.fc1", flat, cfg.dense_width, lg, rng);
    fc2_ = DenseLayer<T>("d.fc2", cfg.dense_width, 1, 1.0, rng);
    set_training(true);
  }

  // image in HR range -> probability per sample, shape (N,1)
  Tensor<T> forward(const Tensor<T>& img) {
    if (img.shape.c != 3 || img.shape.h != cfg_.input_size ||
        img.shape.w != cfg_.input_size)
      fail(ErrorCode::ShapeMismatch,
           "discriminator expects (N,3," + std::to_string(cfg_.input_size) +
               "," + std::to_string(cfg_.input_size) + "), got " +
               img.shape.str());
    bool c = training_;
    T alpha = static_cast<T>(cfg_.leaky_alpha);
    Tensor<T> h = img;
    conv_pre_.assign(8, Tensor<T>());
    for (int i = 0; i < 8; ++i) {
      h = convs_[i].forward(h, c);
      if (i > 0) h = bns_[i].forward(h);
      if (c) conv_pre_[i] = h;
      h = nn::leaky_relu(h, alpha);
    }
    feat_shape_.n = h.shape.n;
    flat_shape_ = h.shape;
    h = fc1_.forward(h, c);
    if (c) fc1_pre_ = h;
    h = nn::leaky_relu(h, alpha);
    logits_ = fc2_.forward(h, c);
    probs_ = nn::sigmoid(logits_);
    return probs_;
  }

  const Tensor<T>& logits() const { return logits_; }
  const Tensor<T>& probs() const { return probs_; }
  // feature-map shape entering the dense head on the last forward
  const Shape& feature_shape() const { return feat_shape_; }

  // backward from d(loss)/d(logits); accumulates parameter gradients and
  // returns the gradient w.r.t. the input image
  Tensor<T> backward_logits(const Tensor<T>& grad_logits) {
    T alpha = static_cast<T>(cfg_.leaky_alpha);
    auto g = fc2_.backward(grad_logits);
    g = nn::leaky_relu_backward(fc1_pre_, alpha, g);
    g = fc1_.backward(g);
    g.shape = flat_shape_;  // un-flatten
    for (int i = 7; i >= 0; --i) {
      g = nn::leaky_relu_backward(conv_pre_[i], alpha, g);
      if (i > 0) g = bns_[i].backward(g);
      g = convs_[i].backward(g);
    }
    return g;
  }

  std::vector<Param<T>*> params() {
    std::vector<Param<T>*> ps;
    for (int i = 0; i < 8; ++i) {
      ps.push_back(&convs_[i].w);
      ps.push_back(&convs_[i].b);
      if (i > 0) {
        ps.push_back(&bns_[i].st.gamma);
        ps.push_back(&bns_[i].st.beta);
      }
    }
    ps.push_back(&fc1_.w);
    ps.push_back(&fc1_.b);
    ps.push_back(&fc2_.w);
    ps.push_back(&fc2_.b);
    return ps;
  }

  std::vector<std::pair<std::string, nn::BatchNormState<T>*>> bn_states() {
    std::vector<std::pair<std::string, nn::BatchNormState<T>*>> out;
    for (int i = 1; i < 8; ++i)
      out.emplace_back("d.bn" + std::to_string(i), &bns_[i].st);
    return out;
  }

  void set_training(bool t) {
    training_ = t;
    for (auto& [name, st] : bn_states()) st->training = t;
  }
  void set_track_running(bool t) {
    for (auto& [name, st] : bn_states()) st->track_running = t;
  }
  void zero_grads() {
    for (auto* p : params()) p->zero_grad();
  }
  const DiscriminatorConfig& config() const { return cfg_; }

 private:
  DiscriminatorConfig cfg_;
  std::vector<Conv2dLayer<T>> convs_;
  std::vector<BatchNormLayer<T>> bns_;
  DenseLayer<T> fc1_, fc2_;
  std::vector<Tensor<T>> conv_pre_;
  Tensor<T> fc1_pre_, logits_, probs_;
  Shape feat_shape_{}, flat_shape_{};
  bool training_ = true;
};

// --- frozen feature extractor ---

struct FeatureExtractorConfig {
  std::vector<int> block_convs{2, 2, 4, 4, 4};
  std::vector<int> widths{64, 128, 256, 512, 512};
  int tap_block = 5;  // i: feature map before the i-th maxpool
  int tap_conv = 4;   // j: after the j-th convolution's activation

  void validate() const {
    if (block_convs.empty() || block_convs.size() != widths.size())
      fail(ErrorCode::InvalidArgument, "extractor layout lists must match");
    if (tap_block < 1 || tap_block > static_cast<int>(block_convs.size()))
      fail(ErrorCode::InvalidArgument,
           "tap block " + std::to_string(tap_block) + " outside layout");
    if (tap_conv < 1 || tap_conv > block_convs[tap_block - 1])
      fail(ErrorCode::InvalidArgument,
           "tap conv " + std::to_string(tap_conv) + " outside block " +
               std::to_string(tap_block));
  }
};

// Orthogonal-style init: gaussian matrix, Gram-Schmidt over the smaller
// dimension, rescaled by `gain`.
template <typename T>
void orthogonal_init(Tensor<T>& w, int rows, int cols, double gain, Rng& rng) {
  bool by_rows = rows <= cols;
  int nvec = by_rows ? rows : cols;
  int dim = by_rows ? cols : rows;
  std::vector<std::vector<double>> q(nvec, std::vector<double>(dim));
  for (auto& v : q)
    for (auto& x : v) x = rng.normal();
  for (int i = 0; i < nvec; ++i) {
    for (int j = 0; j < i; ++j) {
      double d = 0;
      for (int k = 0; k < dim; ++k) d += q[i][k] * q[j][k];
      for (int k = 0; k < dim; ++k) q[i][k] -= d * q[j][k];
    }
    double norm = 0;
    for (double x : q[i]) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-12) norm = 1.0;
    for (double& x : q[i]) x /= norm;
  }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double v = by_rows ? q[r][c] : q[c][r];
      w.data[static_cast<size_t>(r) * cols + c] = static_cast<T>(gain * v);
    }
}

template <typename T>
class FeatureExtractor {
 public:
  FeatureExtractor(const FeatureExtractorConfig& cfg, uint64_t seed)
      : cfg_(cfg) {
    cfg.validate();
    Rng rng(seed);
    build_layout();
    for (auto& l : layers_) {
      if (l.is_pool) continue;
      orthogonal_init(l.w, l.spec.n_out, l.spec.n_in * l.spec.k * l.spec.k,
                      std::sqrt(2.0), rng);
    }
  }

  Tensor<T> forward(const Tensor<T>& img, bool cache = true) {
    if (img.shape.c != 3)
      fail(ErrorCode::ShapeMismatch, "feature extractor expects 3 channels");
    int need = 1 << pool_count();
    if (img.shape.h < need || img.shape.w < need)
      fail(ErrorCode::ShapeMismatch,
           "input too small for " + std::to_string(pool_count()) + " poolings");
    Tensor<T> h = img;
    for (auto& l : layers_) {
      if (l.is_pool) {
        auto r = nn::maxpool2x2(h);
        if (cache) {
          l.pool_in_shape = h.shape;
          l.argmax = std::move(r.argmax);
        }
        h = std::move(r.y);
      } else {
        if (cache) l.cached_x = h;
        h = nn::conv2d(h, l.w, l.b, l.spec);
        if (cache) l.pre_act = h;
        h = nn::relu(h);
      }
    }
    return h;
  }

  // gradient w.r.t. the input image; the extractor itself stays frozen
  Tensor<T> backward_to_input(const Tensor<T>& grad_feat) {
    Tensor<T> g = grad_feat;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      if (it->is_pool) {
        g = nn::maxpool2x2_backward(it->pool_in_shape, it->argmax, g);
      } else {
        g = nn::relu_backward(it->pre_act, g);
        g = nn::conv2d_backward(it->cached_x, it->w, it->spec, g).x;
      }
    }
    return g;
  }

  int conv_count() const {
    int n = 0;
    for (const auto& l : layers_)
      if (!l.is_pool) ++n;
    return n;
  }
  int pool_count() const {
    int n = 0;
    for (const auto& l : layers_)
      if (l.is_pool) ++n;
    return n;
  }

  std::vector<std::pair<std::string, const Tensor<T>*>> named_weights() const {
    std::vector<std::pair<std::string, const Tensor<T>*>> out;
    for (const auto& l : layers_) {
      if (l.is_pool) continue;
      out.emplace_back(l.name + ".w", &l.w);
      out.emplace_back(l.name + ".b", &l.b);
    }
    return out;
  }

  // replaces the seeded weights with externally supplied tensors keyed by
  // the same names; every conv must be covered and shapes must agree
  void load_named_weights(
      const std::vector<std::pair<std::string, std::vector<float>>>& entries) {
    for (auto& l : layers_) {
      if (l.is_pool) continue;
      load_one(entries, l.name + ".w", l.w);
      load_one(entries, l.name + ".b", l.b);
    }
  }

  const FeatureExtractorConfig& config() const { return cfg_; }

 private:
  struct Layer {
    bool is_pool = false;
    std::string name;
    nn::ConvSpec spec;
    Tensor<T> w, b;  // frozen
    Tensor<T> cached_x, pre_act;
    Shape pool_in_shape;
    std::vector<uint32_t> argmax;
  };

  void build_layout() {
    int in_c = 3;
    for (int bi = 1; bi <= static_cast<int>(cfg_.block_convs.size()); ++bi) {
      for (int cj = 1; cj <= cfg_.block_convs[bi - 1]; ++cj) {
        Layer l;
        l.name = "b" + std::to_string(bi) + ".c" + std::to_string(cj);
        l.spec = {3, in_c, cfg_.widths[bi - 1], 1};
        l.w = Tensor<T>(Shape{l.spec.n_out, l.spec.n_in, 3, 3});
        l.b = Tensor<T>(Shape{l.spec.n_out, 1, 1, 1});
        layers_.push_back(std::move(l));
        in_c = cfg_.widths[bi - 1];
        if (bi == cfg_.tap_block && cj == cfg_.tap_conv) return;
      }
      Layer pool;
      pool.is_pool = true;
      layers_.push_back(std::move(pool));
    }
  }

  void load_one(
      const std::vector<std::pair<std::string, std::vector<float>>>& entries,
      const std::string& name, Tensor<T>& dst) {
    for (const auto& [n, vals] : entries) {
      if (n != name) continue;
      if (vals.size() != dst.count())
        fail(ErrorCode::Format, "weight '" + name + "' has " +
                                    std::to_string(vals.size()) +
                                    " values, expected " +
                                    std::to_string(dst.count()));
      for (size_t i = 0; i < vals.size(); ++i)
        dst.data[i] = static_cast<T>(vals[i]);
      return;
    }
    fail(ErrorCode::Format, "weight file missing entry '" + name + "'");
  }

  FeatureExtractorConfig cfg_;
  std::vector<Layer> layers_;
};

template <typename T>
size_t param_count(const std::vector<Param<T>*>& ps) {
  size_t total = 0;
  for (const auto* p : ps) total += p->value.count();
  return total;
}

}  // namespace sr
