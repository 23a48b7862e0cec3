#include "srgan/trainer.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace sr {

const char* const kPhasePretrain = "srresnet-pretrain";
const char* const kPhaseGan = "srgan";

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string patch_phase(const std::string& config_json, const char* phase) {
  nlohmann::json j = config_json.empty()
                         ? nlohmann::json::object()
                         : nlohmann::json::parse(config_json, nullptr, false);
  if (j.is_discarded()) j = nlohmann::json::object();
  j["phase"] = phase;
  return j.dump();
}

void save_periodic(Generator<float>& gen, const AdamState<float>* adam,
                   long iter, long total, const TrainSchedule& sched,
                   const TrainOptions& opt, const char* phase) {
  if (opt.out_dir.empty()) return;
  bool final = iter == total;
  bool periodic = sched.checkpoint_every > 0 && iter % sched.checkpoint_every == 0;
  if (!final && !periodic) return;
  std::string cfg = patch_phase(opt.config_echo_json, phase);
  Checkpoint ck = generator_checkpoint(gen, adam, static_cast<uint64_t>(iter), cfg);
  if (periodic)
    save_checkpoint(
        (fs::path(opt.out_dir) / ("checkpoint_" + std::to_string(iter) + ".srck"))
            .string(),
        ck);
  if (final)
    save_checkpoint((fs::path(opt.out_dir) / "checkpoint_final.srck").string(),
                    ck);
}

ScalarGrad<float> content_loss(const Tensor<float>& sr, const Tensor<float>& hr,
                               const LossSpec& spec,
                               FeatureExtractor<float>* extractor) {
  if (spec.content == ContentLossKind::Mse) return mse_content_loss(sr, hr);
  if (extractor == nullptr)
    fail(ErrorCode::InvalidArgument, "feature content loss requires an extractor");
  return feature_content_loss(sr, hr, *extractor,
                              static_cast<float>(spec.feature_rescale));
}

}  // namespace

void write_loss_csv(const std::vector<TrainLogRow>& log, bool gan_phase,
                    const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot write '" + path + "'");
  if (gan_phase)
    f << "iter,lr,d_loss,content,adversarial,tv,total\n";
  else
    f << "iter,lr,content,tv,total\n";
  for (const auto& r : log) {
    f << r.iter << "," << fmt(r.lr) << ",";
    if (gan_phase) f << fmt(r.d_loss) << ",";
    f << fmt(r.content) << ",";
    if (gan_phase) f << fmt(r.adversarial) << ",";
    f << fmt(r.tv) << "," << fmt(r.total) << "\n";
  }
}

TrainResult pretrain_srresnet(Generator<float>& gen, const Dataset& data,
                              const LossSpec& spec, const TrainSchedule& sched,
                              const DegradeConfig& deg, const TrainOptions& opt,
                              FeatureExtractor<float>* extractor) {
  spec.validate();
  sched.validate();
  if (spec.adversarial_weight != 0.0)
    fail(ErrorCode::InvalidArgument,
         "pretraining is content-only; adversarial_weight must be 0");
  if (data.size() == 0) fail(ErrorCode::Data, "empty dataset");

  gen.set_training(true);
  Rng rng(sched.seed);
  AdamState<float> adam;
  auto params = gen.params();
  const long total = sched.total_iterations();
  const float w_tv = static_cast<float>(spec.tv_weight);

  TrainResult res;
  res.log.reserve(total);
  for (long iter = 1; iter <= total; ++iter) {
    adam.learning_rate = static_cast<float>(sched.lr_at(iter));
    BatchSample batch = sample_batch(data, sched.batch_size, sched.crop, deg, rng);
    Tensor<float> sr = gen.forward(batch.lr);

    auto content = content_loss(sr, batch.hr, spec, extractor);
    TrainLogRow row;
    row.iter = iter;
    row.lr = adam.learning_rate;
    row.content = content.value;
    Tensor<float> grad_sr = std::move(content.grad);
    if (w_tv > 0.0f) {
      auto tv = total_variation_loss(sr);
      row.tv = tv.value;
      kernels::axpy(grad_sr.count(), w_tv, tv.grad.ptr(), grad_sr.ptr());
    }
    row.total = row.content + w_tv * static_cast<float>(row.tv);
    res.log.push_back(row);

    gen.backward(grad_sr);
    adam_step(params, adam);
    save_periodic(gen, &adam, iter, total, sched, opt, kPhasePretrain);
  }

  if (!opt.out_dir.empty())
    write_loss_csv(res.log, false,
                   (fs::path(opt.out_dir) / "loss_log.csv").string());
  return res;
}

TrainResult train_srgan(Generator<float>& gen, Discriminator<float>& disc,
                        const Dataset& data, const LossSpec& spec,
                        const TrainSchedule& sched, const DegradeConfig& deg,
                        const TrainOptions& opt,
                        FeatureExtractor<float>* extractor) {
  spec.validate();
  sched.validate();
  if (data.size() == 0) fail(ErrorCode::Data, "empty dataset");
  if (!opt.generator_pretrained && !opt.allow_unpretrained)
    fail(ErrorCode::Provenance,
         "generator was not initialized from a pretraining checkpoint "
         "(pass the override to proceed anyway)");
  if (sched.crop != disc.config().input_size)
    fail(ErrorCode::InvalidArgument,
         "crop size must equal the discriminator input size");

  gen.set_training(true);
  disc.set_training(true);
  Rng rng(sched.seed);
  AdamState<float> adam_g, adam_d;
  auto params_g = gen.params();
  auto params_d = disc.params();
  const long total = sched.total_iterations();
  const bool adv_mean = spec.adv_mean;

  TrainResult res;
  res.log.reserve(total);
  for (long iter = 1; iter <= total; ++iter) {
    float lr = static_cast<float>(sched.lr_at(iter));
    adam_g.learning_rate = lr;
    adam_d.learning_rate = lr;
    BatchSample batch = sample_batch(data, sched.batch_size, sched.crop, deg, rng);

    // generator forward once; caches back both the D fake pass and the
    // later G update
    Tensor<float> sr = gen.forward(batch.lr);

    // --- discriminator step: separate real and fake passes ---
    disc.set_track_running(true);
    disc.forward(batch.hr);
    Tensor<float> z_real = disc.logits();
    {
      auto part = adversarial_gen_loss_logits(z_real, /*mean=*/true);
      // -mean log D(real): same gradient shape as the generator objective
      disc.backward_logits(part.grad);
    }
    disc.forward(sr);
    Tensor<float> z_fake = disc.logits();
    auto dl = discriminator_loss_logits(z_real, z_fake);
    disc.backward_logits(dl.grad_fake);
    adam_step(params_d, adam_d);

    // --- generator step against the updated discriminator ---
    disc.set_track_running(false);
    Tensor<float> d_fake = disc.forward(sr);
    // d(sum_n -log d_n)/d(logit_n) = d_n - 1
    Tensor<float> adv_logit_grad(d_fake.shape);
    float scale = adv_mean ? 1.0f / static_cast<float>(d_fake.count()) : 1.0f;
    for (size_t i = 0; i < d_fake.count(); ++i)
      adv_logit_grad.data[i] = (d_fake.data[i] - 1.0f) * scale;
    Tensor<float> adv_grad_sr = disc.backward_logits(adv_logit_grad);
    disc.zero_grads();  // the G step must leave no gradient residue in D
    disc.set_track_running(true);

    LossReport<float> rep =
        perceptual_loss(sr, batch.hr, d_fake, spec, extractor, &adv_grad_sr);
    gen.backward(rep.grad_sr);
    adam_step(params_g, adam_g);

    TrainLogRow row;
    row.iter = iter;
    row.lr = lr;
    row.d_loss = dl.value;
    row.content = rep.content;
    row.adversarial = rep.adversarial;
    row.tv = rep.tv;
    row.total = rep.total;
    res.log.push_back(row);

    save_periodic(gen, &adam_g, iter, total, sched, opt, kPhaseGan);
  }

  if (!opt.out_dir.empty())
    write_loss_csv(res.log, true,
                   (fs::path(opt.out_dir) / "loss_log.csv").string());
  return res;
}

void set_eval_mode(Generator<float>& gen) { gen.set_training(false); }
void set_train_mode(Generator<float>& gen) { gen.set_training(true); }

Checkpoint generator_checkpoint(Generator<float>& gen,
                                const AdamState<float>* adam, uint64_t step,
                                const std::string& config_json) {
  Checkpoint ck;
  ck.step = step;
  ck.config_json = config_json;
  auto params = gen.params();
  for (const auto* p : params) {
    CheckpointEntry e;
    e.name = p->name;
    const Shape& s = p->value.shape;
    e.dims = {static_cast<uint64_t>(s.n), static_cast<uint64_t>(s.c),
              static_cast<uint64_t>(s.h), static_cast<uint64_t>(s.w)};
    e.data = p->value.data;
    ck.entries.push_back(std::move(e));
  }
  for (auto& [name, st] : gen.bn_states()) {
    CheckpointEntry m{name + ".running_mean",
                      {static_cast<uint64_t>(st->running_mean.size())},
                      std::vector<float>(st->running_mean.begin(),
                                         st->running_mean.end())};
    CheckpointEntry v{name + ".running_var",
                      {static_cast<uint64_t>(st->running_var.size())},
                      std::vector<float>(st->running_var.begin(),
                                         st->running_var.end())};
    ck.entries.push_back(std::move(m));
    ck.entries.push_back(std::move(v));
  }
  if (adam != nullptr && !adam->m.empty()) {
    for (size_t i = 0; i < params.size(); ++i) {
      CheckpointEntry m{"adam.m." + params[i]->name,
                        {static_cast<uint64_t>(adam->m[i].count())},
                        adam->m[i].data};
      CheckpointEntry v{"adam.v." + params[i]->name,
                        {static_cast<uint64_t>(adam->v[i].count())},
                        adam->v[i].data};
      ck.entries.push_back(std::move(m));
      ck.entries.push_back(std::move(v));
    }
  }
  return ck;
}

bool load_generator(Generator<float>& gen, const Checkpoint& ck,
                    AdamState<float>* adam) {
  auto params = gen.params();
  for (auto* p : params) {
    const CheckpointEntry* e = ck.find(p->name);
    if (e == nullptr)
      fail(ErrorCode::Format, "checkpoint missing parameter '" + p->name + "'");
    if (e->data.size() != p->value.count())
      fail(ErrorCode::Format,
           "parameter '" + p->name + "' has " + std::to_string(e->data.size()) +
               " values, expected " + std::to_string(p->value.count()));
    p->value.data = e->data;
    p->zero_grad();
  }
  for (auto& [name, st] : gen.bn_states()) {
    const CheckpointEntry* m = ck.find(name + ".running_mean");
    const CheckpointEntry* v = ck.find(name + ".running_var");
    if (m == nullptr || v == nullptr)
      fail(ErrorCode::Format, "checkpoint missing BN statistics for '" + name + "'");
    if (m->data.size() != st->running_mean.size() ||
        v->data.size() != st->running_var.size())
      fail(ErrorCode::Format, "BN statistics size mismatch for '" + name + "'");
    st->running_mean.assign(m->data.begin(), m->data.end());
    st->running_var.assign(v->data.begin(), v->data.end());
  }
  bool has_adam = ck.find("adam.m." + params.front()->name) != nullptr;
  if (adam != nullptr && has_adam) {
    adam->m.clear();
    adam->v.clear();
    for (auto* p : params) {
      const CheckpointEntry* m = ck.find("adam.m." + p->name);
      const CheckpointEntry* v = ck.find("adam.v." + p->name);
      if (m == nullptr || v == nullptr)
        fail(ErrorCode::Format, "incomplete Adam state for '" + p->name + "'");
      Tensor<float> tm(p->value.shape), tv(p->value.shape);
      if (m->data.size() != tm.count() || v->data.size() != tv.count())
        fail(ErrorCode::Format, "Adam state size mismatch for '" + p->name + "'");
      tm.data = m->data;
      tv.data = v->data;
      adam->m.push_back(std::move(tm));
      adam->v.push_back(std::move(tv));
    }
    adam->t = ck.step;
  }
  return has_adam;
}

std::string checkpoint_phase(const Checkpoint& ck) {
  nlohmann::json j = nlohmann::json::parse(ck.config_json, nullptr, false);
  if (j.is_discarded() || !j.contains("phase")) return "";
  return j["phase"].get<std::string>();
}

}  // namespace sr
