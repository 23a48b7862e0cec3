#include "srgan/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace sr {

namespace {

void check_range(float lo, float hi, const char* where) {
  bool ok = (lo == 0.0f && hi == 1.0f) || (lo == -1.0f && hi == 1.0f);
  if (!ok)
    fail(ErrorCode::InvalidArgument,
         std::string(where) + ": range must be (0,1) or (-1,1)");
}

// Catmull-Rom cubic (Keys kernel, a = -0.5), support 2
double cubic_weight(double t) {
  t = std::fabs(t);
  if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

struct TapSet {
  int first = 0;
  std::vector<double> weights;
};

// Per-output-pixel taps for 1D cubic resampling. scale = in/out; when
// downscaling the kernel is stretched by the scale factor (anti-aliasing).
// Indices are clamped to the edge; weights are normalized to sum 1.
std::vector<TapSet> build_taps(int in_size, int out_size, double scale) {
  double kscale = std::max(scale, 1.0);
  double support = 2.0 * kscale;
  std::vector<TapSet> taps(out_size);
  for (int o = 0; o < out_size; ++o) {
    double center = (o + 0.5) * scale - 0.5;
    int lo = static_cast<int>(std::ceil(center - support));
    int hi = static_cast<int>(std::floor(center + support));
    TapSet t;
    t.first = std::clamp(lo, 0, in_size - 1);
    int last = std::clamp(hi, 0, in_size - 1);
    t.weights.assign(last - t.first + 1, 0.0);
    double wsum = 0.0;
    for (int i = lo; i <= hi; ++i) {
      double w = cubic_weight((i - center) / kscale);
      if (w == 0.0) continue;
      int ci = std::clamp(i, 0, in_size - 1);
      t.weights[ci - t.first] += w;
      wsum += w;
    }
    if (wsum != 0.0)
      for (double& w : t.weights) w /= wsum;
    taps[o] = std::move(t);
  }
  return taps;
}

ImageF resample_cubic(const ImageF& img, int out_h, int out_w) {
  const int c = img.channels;
  auto htaps = build_taps(img.width, out_w,
                          static_cast<double>(img.width) / out_w);
  auto vtaps = build_taps(img.height, out_h,
                          static_cast<double>(img.height) / out_h);

  // horizontal pass
  ImageF mid(img.height, out_w, c, img.range_lo, img.range_hi);
  for (int y = 0; y < img.height; ++y)
    for (int ox = 0; ox < out_w; ++ox) {
      const TapSet& t = htaps[ox];
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (size_t i = 0; i < t.weights.size(); ++i)
          acc += t.weights[i] * img.at(y, t.first + static_cast<int>(i), ch);
        mid.at(y, ox, ch) = static_cast<float>(acc);
      }
    }

  // vertical pass
  ImageF out(out_h, out_w, c, img.range_lo, img.range_hi);
  for (int oy = 0; oy < out_h; ++oy) {
    const TapSet& t = vtaps[oy];
    for (int x = 0; x < out_w; ++x)
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (size_t i = 0; i < t.weights.size(); ++i)
          acc += t.weights[i] * mid.at(t.first + static_cast<int>(i), x, ch);
        out.at(oy, x, ch) = static_cast<float>(acc);
      }
  }
  return out;
}

}  // namespace

ImageF to_float(const ImageU8& img, float lo, float hi) {
  check_range(lo, hi, "to_float");
  ImageF out(img.height, img.width, img.channels, lo, hi);
  float scale = (hi - lo) / 255.0f;
  for (size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = lo + scale * static_cast<float>(img.data[i]);
  return out;
}

ImageU8 from_float(const ImageF& img) {
  ImageU8 out(img.height, img.width, img.channels);
  float scale = 255.0f / (img.range_hi - img.range_lo);
  for (size_t i = 0; i < img.data.size(); ++i) {
    float v = (img.data[i] - img.range_lo) * scale;
    long b = std::lround(v);
    out.data[i] = static_cast<uint8_t>(std::clamp(b, 0L, 255L));
  }
  return out;
}

ImageF rescale_range(const ImageF& img, float lo, float hi) {
  check_range(lo, hi, "rescale_range");
  ImageF out = img;
  out.range_lo = lo;
  out.range_hi = hi;
  float a = (hi - lo) / (img.range_hi - img.range_lo);
  float b = lo - a * img.range_lo;
  for (float& v : out.data) v = a * v + b;
  return out;
}

ImageF gaussian_blur(const ImageF& img, float sigma) {
  if (sigma <= 0.0f)
    fail(ErrorCode::InvalidArgument, "gaussian_blur sigma must be > 0");
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double s2 = 2.0 * sigma * sigma, sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(static_cast<double>(i) * i) / s2);
    sum += k[i + radius];
  }
  for (double& w : k) w /= sum;

  const int c = img.channels;
  ImageF mid(img.height, img.width, c, img.range_lo, img.range_hi);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          int xi = std::clamp(x + i, 0, img.width - 1);
          acc += k[i + radius] * img.at(y, xi, ch);
        }
        mid.at(y, x, ch) = static_cast<float>(acc);
      }
  ImageF out(img.height, img.width, c, img.range_lo, img.range_hi);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          int yi = std::clamp(y + i, 0, img.height - 1);
          acc += k[i + radius] * mid.at(yi, x, ch);
        }
        out.at(y, x, ch) = static_cast<float>(acc);
      }
  return out;
}

ImageF downsample_bicubic(const ImageF& img, const DegradeConfig& cfg) {
  cfg.validate();
  if (img.height % cfg.factor != 0 || img.width % cfg.factor != 0)
    fail(ErrorCode::InvalidArgument,
         "downsample_bicubic: dimensions " + std::to_string(img.height) + "x" +
             std::to_string(img.width) + " not divisible by " +
             std::to_string(cfg.factor));
  return resample_cubic(img, img.height / cfg.factor, img.width / cfg.factor);
}

ImageF upsample_bicubic(const ImageF& img, int r) {
  if (r < 2) fail(ErrorCode::InvalidArgument, "upsample_bicubic: r must be >= 2");
  return resample_cubic(img, img.height * r, img.width * r);
}

ImageF upsample_nearest(const ImageF& img, int r) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "upsample_nearest: r must be >= 1");
  ImageF out(img.height * r, img.width * r, img.channels, img.range_lo,
             img.range_hi);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      for (int c = 0; c < img.channels; ++c)
        out.at(y, x, c) = img.at(y / r, x / r, c);
  return out;
}

ImageF crop(const ImageF& img, int y0, int x0, int h, int w) {
  if (y0 < 0 || x0 < 0 || y0 + h > img.height || x0 + w > img.width)
    fail(ErrorCode::ImageTooSmall, "crop window out of bounds");
  ImageF out(h, w, img.channels, img.range_lo, img.range_hi);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < img.channels; ++c)
        out.at(y, x, c) = img.at(y0 + y, x0 + x, c);
  return out;
}

ImageF crop_border(const ImageF& img, int border) {
  if (border < 0)
    fail(ErrorCode::InvalidArgument, "crop_border: negative border");
  if (border == 0) return img;
  if (img.height <= 2 * border || img.width <= 2 * border)
    fail(ErrorCode::ImageTooSmall,
         "crop_border: image " + std::to_string(img.height) + "x" +
             std::to_string(img.width) + " too small for border " +
             std::to_string(border));
  return crop(img, border, border, img.height - 2 * border,
              img.width - 2 * border);
}

ImageF center_crop_to_multiple(const ImageF& img, int r) {
  int h = (img.height / r) * r;
  int w = (img.width / r) * r;
  if (h == 0 || w == 0)
    fail(ErrorCode::ImageTooSmall, "image smaller than one factor tile");
  if (h == img.height && w == img.width) return img;
  return crop(img, (img.height - h) / 2, (img.width - w) / 2, h, w);
}

std::pair<ImageF, ImageF> random_crop_pair(const ImageF& hr, int crop_size,
                                           const DegradeConfig& cfg, Rng& rng) {
  cfg.validate();
  if (crop_size % cfg.factor != 0)
    fail(ErrorCode::InvalidArgument,
         "crop size must be divisible by the downsampling factor");
  if (hr.height < crop_size || hr.width < crop_size)
    fail(ErrorCode::ImageTooSmall,
         "image " + std::to_string(hr.height) + "x" +
             std::to_string(hr.width) + " smaller than crop " +
             std::to_string(crop_size));
  int oy = static_cast<int>(rng.uniform_int(0, hr.height - crop_size));
  int ox = static_cast<int>(rng.uniform_int(0, hr.width - crop_size));
  ImageF hr_crop = crop(hr, oy, ox, crop_size, crop_size);
  ImageF work = cfg.gaussian_sigma ? gaussian_blur(hr_crop, *cfg.gaussian_sigma)
                                   : hr_crop;
  return {std::move(hr_crop), downsample_bicubic(work, cfg)};
}

ImageF rgb_to_y(const ImageF& img) {
  if (img.channels != 3)
    fail(ErrorCode::InvalidArgument, "rgb_to_y expects 3 channels");
  ImageF out(img.height, img.width, 1, img.range_lo, img.range_hi);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out.at(y, x, 0) = 0.299f * img.at(y, x, 0) + 0.587f * img.at(y, x, 1) +
                        0.114f * img.at(y, x, 2);
  return out;
}

std::vector<std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open manifest '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r\n");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace sr
