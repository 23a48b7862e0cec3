#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srgan/error.hpp"
#include "srgan/rng.hpp"

namespace sr {

// Row-major, channel-interleaved 8-bit image (1 or 3 channels).
struct ImageU8 {
  int height = 0, width = 0, channels = 0;
  std::vector<uint8_t> data;

  ImageU8() = default;
  ImageU8(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(static_cast<size_t>(h) * w * c, 0) {}
  size_t count() const { return data.size(); }
};

// Floating-point image with a declared value range, (0,1) or (-1,1).
struct ImageF {
  int height = 0, width = 0, channels = 0;
  std::vector<float> data;
  float range_lo = 0.0f, range_hi = 1.0f;

  ImageF() = default;
  ImageF(int h, int w, int c, float lo = 0.0f, float hi = 1.0f)
      : height(h), width(w), channels(c),
        data(static_cast<size_t>(h) * w * c, 0.0f), range_lo(lo), range_hi(hi) {}
  size_t count() const { return data.size(); }
  size_t index(int y, int x, int c) const {
    return (static_cast<size_t>(y) * width + x) * channels + c;
  }
  float& at(int y, int x, int c) { return data[index(y, x, c)]; }
  float at(int y, int x, int c) const { return data[index(y, x, c)]; }
};

// HR -> LR degradation model: fixed Catmull-Rom bicubic decimation, optional
// Gaussian pre-filter.
struct DegradeConfig {
  int factor = 4;
  std::optional<float> gaussian_sigma;

  void validate() const {
    if (factor < 2)
      fail(ErrorCode::InvalidArgument, "degradation factor must be >= 2");
    if (gaussian_sigma && *gaussian_sigma <= 0.0f)
      fail(ErrorCode::InvalidArgument, "gaussian sigma must be > 0");
  }
};

// PNG I/O (8-bit grayscale or RGB; 16-bit files are rejected)
ImageU8 load_png(const std::string& path);
void save_png(const ImageU8& img, const std::string& path);

// byte <-> float range scaling; from_float rounds to nearest and clamps
ImageF to_float(const ImageU8& img, float lo, float hi);
ImageU8 from_float(const ImageF& img);
// remap between declared ranges, e.g. [0,1] -> [-1,1]
ImageF rescale_range(const ImageF& img, float lo, float hi);

ImageF gaussian_blur(const ImageF& img, float sigma);
ImageF downsample_bicubic(const ImageF& img, const DegradeConfig& cfg);
ImageF upsample_bicubic(const ImageF& img, int r);
ImageF upsample_nearest(const ImageF& img, int r);

// uniformly random crop of `crop` x `crop` plus its degraded counterpart
std::pair<ImageF, ImageF> random_crop_pair(const ImageF& hr, int crop,
                                           const DegradeConfig& cfg, Rng& rng);

ImageF rgb_to_y(const ImageF& img);
ImageF crop_border(const ImageF& img, int border);
ImageF crop(const ImageF& img, int y0, int x0, int h, int w);
// center-crop so both dimensions are divisible by r
ImageF center_crop_to_multiple(const ImageF& img, int r);

// one path per line, '#' starts a comment, blank lines ignored
std::vector<std::string> read_manifest(const std::string& path);

}  // namespace sr
