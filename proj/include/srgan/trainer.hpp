#pragma once

#include <string>
#include <vector>

#include "srgan/adam.hpp"
#include "srgan/checkpoint.hpp"
#include "srgan/image.hpp"
#include "srgan/losses.hpp"
#include "srgan/models.hpp"

namespace sr {

struct LrSegment {
  long iterations = 0;
  double lr = 0.0;
};

struct TrainSchedule {
  std::vector<LrSegment> lr_segments;
  int batch_size = 16;
  int crop = 96;
  uint64_t seed = 0;
  long checkpoint_every = 0;  // 0 = final checkpoint only

  long total_iterations() const {
    long t = 0;
    for (const auto& s : lr_segments) t += s.iterations;
    return t;
  }
  // 1-based iteration index
  double lr_at(long iter) const {
    long acc = 0;
    for (const auto& s : lr_segments) {
      acc += s.iterations;
      if (iter <= acc) return s.lr;
    }
    return lr_segments.back().lr;
  }
  void validate() const {
    if (lr_segments.empty())
      fail(ErrorCode::InvalidArgument, "schedule needs lr segments");
    for (const auto& s : lr_segments)
      if (s.iterations <= 0 || s.lr <= 0.0)
        fail(ErrorCode::InvalidArgument, "lr segments need positive counts and rates");
    if (batch_size < 1) fail(ErrorCode::InvalidArgument, "batch_size must be >= 1");
    if (crop < 1) fail(ErrorCode::InvalidArgument, "crop must be >= 1");
  }
};

// decoded training images, cached in memory as [0,1] floats (grayscale
// expanded to RGB)
class Dataset {
 public:
  static Dataset from_manifest(const std::string& manifest_path);
  static Dataset from_images(std::vector<ImageF> images);

  size_t size() const { return images_.size(); }
  const ImageF& image(size_t i) const { return images_[i]; }

 private:
  std::vector<ImageF> images_;
};

struct BatchSample {
  Tensor<float> lr;  // [0,1]
  Tensor<float> hr;  // [-1,1]
};

// uniform sampling with replacement; one crop pair per batch element
BatchSample sample_batch(const Dataset& data, int batch_size, int crop,
                         const DegradeConfig& deg, Rng& rng);

struct TrainLogRow {
  long iter = 0;
  double lr = 0.0;
  double d_loss = 0.0;  // gan phase only
  double content = 0.0, adversarial = 0.0, tv = 0.0, total = 0.0;
};

struct TrainResult {
  std::vector<TrainLogRow> log;
};

struct TrainOptions {
  std::string out_dir;  // loss CSV and checkpoints land here; empty = none
  std::string config_echo_json = "{}";
  // provenance of the generator passed to train_srgan
  bool generator_pretrained = false;
  bool allow_unpretrained = false;
};

extern const char* const kPhasePretrain;
extern const char* const kPhaseGan;

TrainResult pretrain_srresnet(Generator<float>& gen, const Dataset& data,
                              const LossSpec& spec, const TrainSchedule& sched,
                              const DegradeConfig& deg,
                              const TrainOptions& opt,
                              FeatureExtractor<float>* extractor = nullptr);

TrainResult train_srgan(Generator<float>& gen, Discriminator<float>& disc,
                        const Dataset& data, const LossSpec& spec,
                        const TrainSchedule& sched, const DegradeConfig& deg,
                        const TrainOptions& opt,
                        FeatureExtractor<float>* extractor = nullptr);

// flips every BN state to eval so forwards depend only on the input
void set_eval_mode(Generator<float>& gen);
void set_train_mode(Generator<float>& gen);

// checkpoint bridge: parameters, BN running statistics, optional Adam state
Checkpoint generator_checkpoint(Generator<float>& gen,
                                const AdamState<float>* adam, uint64_t step,
                                const std::string& config_json);
// loads tensors by name into an already-built generator; shapes must agree.
// Returns true when Adam state was present (and adam != nullptr was filled).
bool load_generator(Generator<float>& gen, const Checkpoint& ck,
                    AdamState<float>* adam = nullptr);

// reads the "phase" key of the checkpoint's config echo ("" when absent)
std::string checkpoint_phase(const Checkpoint& ck);

void write_loss_csv(const std::vector<TrainLogRow>& log, bool gan_phase,
                    const std::string& path);

}  // namespace sr
