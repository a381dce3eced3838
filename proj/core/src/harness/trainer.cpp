// Copyright 2026 The tsebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tse/harness/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tse/common/error.hpp"
#include "tse/common/rng.hpp"
#include "tse/metrics/si_sdr.hpp"
#include "tse/nn/params.hpp"

namespace tse {

namespace fs = std::filesystem;

nlohmann::json EpochLog::to_json() const {
  return {{"epoch", epoch}, {"wall_clock_s", wall_clock_s}, {"train_loss", train_loss}, {"valid_neg_si_sdr", valid_neg_si_sdr}};
}

EpochLog EpochLog::from_json(const nlohmann::json& j) {
  return {j.at("epoch").get<int>(), j.at("wall_clock_s").get<double>(), j.at("train_loss").get<double>(),
          j.at("valid_neg_si_sdr").get<double>()};
}

std::vector<EpochLog> read_curve(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<EpochLog> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(EpochLog::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw CorruptFileError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

double sample_loss(const TseModel& model, const PreparedSample& sample, LossKind loss, TseModel* grads) {
  const TseInputs in = sample.inputs();
  TseForwardCache cache;
  const AudioSignal est = model.forward(in, &cache);
  const auto target = sample.audio.target.view();
  if (loss == LossKind::kSiSdr) {
    std::vector<double> g;
    const double value = si_sdr_loss(est.view(), target, grads ? &g : nullptr);
    if (grads && std::isfinite(value)) model.backward(in, cache, g, *grads);
    return value;
  }
  if (model.config.encoder != EncoderKind::kStft || cache.mask.kind != MaskKind::kMagnitude)
    throw ConfigError("spectral MSE needs the STFT encoder with a magnitude mask");
  const Mat mix_mag = magnitude(cache.mixture_spec).topRows(cache.frames);
  const Mat ref_mag = magnitude(stft_encode(target)).topRows(cache.frames);
  const Mat est_mag = cache.mask.real.cwiseProduct(mix_mag);
  Mat g;
  const double value = spectral_mse(est_mag, ref_mag, grads ? &g : nullptr);
  if (grads && std::isfinite(value)) {
    MaskTensor gm;
    gm.kind = MaskKind::kMagnitude;
    gm.real = g.cwiseProduct(mix_mag);
    model.backward_from_mask(in, cache, gm, *grads);
  }
  return value;
}

double validation_loss(const TseModel& model, const std::vector<PreparedSample>& samples) {
  if (samples.empty()) throw EmptyInputError("validation set is empty");
  double total = 0.0;
  for (const auto& s : samples) total += sample_loss(model, s, LossKind::kSiSdr);
  return total / static_cast<double>(samples.size());
}

namespace {

double steady_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void check_models_finite(const std::vector<NamedTensor>& tensors, int epoch, int batch) {
  for (const auto& [name, m] : tensors)
    if (!m->allFinite())
      throw TrainingError("non-finite gradient in " + name + " at epoch " + std::to_string(epoch) + ", batch " +
                          std::to_string(batch));
}

}  // namespace

TrainResult train(const RunConfig& config, const fs::path& train_manifest, const fs::path& valid_manifest,
                  const fs::path& out_dir, const TrainOptions& options) {
  config.validate();
  const auto clock = options.clock ? options.clock : steady_seconds;
  const auto train_entries = load_manifest(train_manifest);
  const auto valid_entries = load_manifest(valid_manifest);
  if (train_entries.empty()) throw ValidationError("training manifest is empty");
  if (valid_entries.empty()) throw ValidationError("validation manifest is empty");

  const auto provider = make_feature_provider(config);
  const int layers = provider ? provider->num_layers() : config.upstream.layers + 1;
  const int dim = provider ? provider->dim() : config.upstream.dim;
  const auto checksum_before = provider ? provider->checksum() : std::nullopt;

  fs::create_directories(out_dir);
  const fs::path curve_path = out_dir / "curve.jsonl";

  Checkpoint state;
  if (options.resume) {
    state = Checkpoint::load(*options.resume);
    if (state.config.to_json() != config.to_json())
      throw ConfigError("resume checkpoint was trained with a different configuration");
    if (state.model.config.upstream_layers != layers || state.model.config.upstream_dim != dim)
      throw ConfigError("resume checkpoint does not match the upstream dimensions");
  } else {
    if (fs::exists(curve_path))
      throw ValidationError(out_dir.string() + " already holds a training run; pass a checkpoint to resume");
    state.config = config;
    state.model = TseModel::init(config.model_config(layers, dim), config.seed);
    state.model.visit("", [](const std::string&, Mat& m) { round_to_float(m); });
    state.best_valid_loss = std::numeric_limits<double>::infinity();
  }
  state.upstream_checksum = checksum_before;
  config.save(out_dir / "config.json");

  const auto train_set = prepare_samples(train_entries, provider.get());
  const auto valid_set = prepare_samples(valid_entries, provider.get());

  TseModel& model = state.model;
  TseModel grads = zeros_like(model);
  const auto params = named_parameters(model);
  const auto grad_list = named_parameters(grads);
  AdamOptions adam_options;
  adam_options.lr = config.optimizer.lr;
  adam_options.float32_state = true;
  Adam adam(params, adam_options);
  if (options.resume && !state.optimizer_state.empty()) adam.restore(state.optimizer_state, state.optimizer_steps);

  const std::size_t crop = static_cast<std::size_t>(std::llround(config.optimizer.crop_s * kSampleRate));
  const std::size_t batch = static_cast<std::size_t>(config.optimizer.batch_size);
  const double start = clock();
  const double prior_wall = state.wall_clock_s;

  TrainResult result;
  std::ofstream curve(curve_path, std::ios::app);
  if (!curve) throw IoError("cannot write " + curve_path.string());

  for (int epoch = state.epoch + 1; epoch <= config.optimizer.epochs; ++epoch) {
    Rng rng(Rng::derive(config.seed, 0x7a1, static_cast<std::uint64_t>(epoch)));
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    double loss_sum = 0.0;
    int batch_id = 0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += batch, ++batch_id) {
      const std::size_t b1 = std::min(order.size(), b0 + batch);
      set_zero(grads);
      for (std::size_t k = b0; k < b1; ++k) {
        const PreparedSample& full = train_set[order[k]];
        const std::size_t pos = rng.below(crop_positions(full, crop));
        const PreparedSample sample = crop_sample(full, crop, pos);
        const double loss = sample_loss(model, sample, config.loss_kind, &grads);
        if (!std::isfinite(loss))
          throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batch_id) + " (sample " + sample.entry.id + ")");
        loss_sum += loss;
      }
      const double scale = 1.0 / static_cast<double>(b1 - b0);
      for (const auto& [name, g] : grad_list) *g *= scale;
      check_models_finite(grad_list, epoch, batch_id);
      clip_global_norm(grad_list, config.optimizer.grad_clip);
      adam.step(grad_list);
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(train_set.size());
    log.valid_neg_si_sdr = validation_loss(model, valid_set);
    if (!std::isfinite(log.valid_neg_si_sdr))
      throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch));
    log.wall_clock_s = prior_wall + (clock() - start);
    curve << log.to_json().dump() << "\n" << std::flush;
    result.curve.push_back(log);

    state.epoch = epoch;
    state.train_loss = log.train_loss;
    state.valid_loss = log.valid_neg_si_sdr;
    state.wall_clock_s = log.wall_clock_s;
    state.optimizer_state = adam.state();
    state.optimizer_steps = adam.steps();
    const bool improved = log.valid_neg_si_sdr < state.best_valid_loss;
    if (improved) state.best_valid_loss = log.valid_neg_si_sdr;
    state.save(out_dir / "last");
    if (improved) state.save(out_dir / "best");
    if (options.log) {
      std::ostringstream line;
      line << "epoch " << epoch << " train_loss " << log.train_loss << " valid_neg_si_sdr " << log.valid_neg_si_sdr
           << (improved ? " *" : "");
      *options.log << line.str() << std::endl;
    }
  }

  if (provider && provider->checksum() != checksum_before)
    throw TrainingError("upstream parameters changed during training");

  if (!fs::exists(out_dir / "last")) state.save(out_dir / "last");
  if (!fs::exists(out_dir / "best")) state.save(out_dir / "best");
  result.last = Checkpoint::load(out_dir / "last");
  result.best = Checkpoint::load(out_dir / "best");
  return result;
}

}  // namespace tse
