#pragma once

#include "srgan/image.hpp"
#include "srgan/tensor.hpp"

namespace sr {

// interleaved HWC image -> planar (1,C,H,W) tensor, values copied as-is
inline Tensor<float> image_to_tensor(const ImageF& img) {
  Tensor<float> t(1, img.channels, img.height, img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c)
        t.at(0, c, y, x) = img.at(y, x, c);
  return t;
}

inline void copy_image_into_batch(const ImageF& img, Tensor<float>& batch,
                                  int n, float scale = 1.0f,
                                  float offset = 0.0f) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c)
        batch.at(n, c, y, x) = scale * img.at(y, x, c) + offset;
}

inline ImageF tensor_to_image(const Tensor<float>& t, int n, float lo,
                              float hi) {
  ImageF img(t.shape.h, t.shape.w, t.shape.c, lo, hi);
  for (int y = 0; y < t.shape.h; ++y)
    for (int x = 0; x < t.shape.w; ++x)
      for (int c = 0; c < t.shape.c; ++c)
        img.at(y, x, c) = std::clamp(t.at(n, c, y, x), lo, hi);
  return img;
}

}  // namespace sr
