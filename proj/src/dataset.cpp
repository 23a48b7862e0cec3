#include "srgan/tensor_image.hpp"
#include "srgan/trainer.hpp"

namespace sr {

namespace {

ImageF expand_to_rgb(ImageF img) {
  if (img.channels == 3) return img;
  ImageF out(img.height, img.width, 3, img.range_lo, img.range_hi);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, x, 0);
  return out;
}

}  // namespace

Dataset Dataset::from_manifest(const std::string& manifest_path) {
  auto paths = read_manifest(manifest_path);
  if (paths.empty())
    fail(ErrorCode::Data, "manifest '" + manifest_path + "' lists no images");
  std::vector<ImageF> images;
  images.reserve(paths.size());
  for (const auto& p : paths)
    images.push_back(expand_to_rgb(to_float(load_png(p), 0.0f, 1.0f)));
  return from_images(std::move(images));
}

Dataset Dataset::from_images(std::vector<ImageF> images) {
  if (images.empty()) fail(ErrorCode::Data, "empty dataset");
  Dataset d;
  d.images_.reserve(images.size());
  for (auto& img : images) d.images_.push_back(expand_to_rgb(std::move(img)));
  return d;
}

BatchSample sample_batch(const Dataset& data, int batch_size, int crop,
                         const DegradeConfig& deg, Rng& rng) {
  deg.validate();
  BatchSample b;
  int lr_side = crop / deg.factor;
  b.lr = Tensor<float>(batch_size, 3, lr_side, lr_side);
  b.hr = Tensor<float>(batch_size, 3, crop, crop);
  for (int n = 0; n < batch_size; ++n) {
    size_t idx = static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(data.size()) - 1));
    auto [hr_crop, lr_crop] = random_crop_pair(data.image(idx), crop, deg, rng);
    copy_image_into_batch(lr_crop, b.lr, n);
    copy_image_into_batch(hr_crop, b.hr, n, 2.0f, -1.0f);  // [0,1] -> [-1,1]
  }
  return b;
}

}  // namespace sr
