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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tse/extractor/tse_model.hpp"
#include "tse/upstream/feature_provider.hpp"

namespace tse {

enum class LossKind { kMse, kSiSdr };
std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

struct UpstreamConfig {
  enum class Kind { kToy, kFiles };
  Kind kind = Kind::kToy;
  std::uint64_t seed = 1234;  // toy
  int layers = 4;             // toy: L
  int dim = 192;              // toy: D
  std::filesystem::path dir;  // files
};

struct OptimizerConfig {
  double lr = 1e-3;
  double grad_clip = 5.0;
  int batch_size = 8;
  int epochs = 200;
  double crop_s = 3.0;
};

// Network widths. Defaults are the full-scale sizes; toy runs shrink them.
struct ModelDims {
  int blstm_hidden = 512;
  int spk_blstm_hidden = 512;
  int spk_blstm_layers = 3;
  int embed = 256;
  int mhfa_heads = 4;
  int mhfa_compress = 128;
  int conv_filters = 512;
};

// One experiment: a system definition plus optimisation settings.
struct RunConfig {
  std::string name;
  EncoderKind encoder_kind = EncoderKind::kStft;
  MaskKind mask_kind = MaskKind::kMagnitude;
  FusionKind fusion_kind = FusionKind::kMultiplication;
  LossKind loss_kind = LossKind::kSiSdr;
  SpkEncKind spk_enc_kind = SpkEncKind::kMhfa;
  FeatureSource extractor_input = FeatureSource::kSsl;
  UpstreamConfig upstream;
  OptimizerConfig optimizer;
  ModelDims model;
  std::uint64_t seed = 0;

  // Throws ConfigError for combinations outside the realised systems:
  // encoder mask <=> learnable encoder, complex mask needs STFT, MSE needs a
  // magnitude mask; plus positive hyperparameters.
  void validate() const;

  bool needs_upstream() const noexcept {
    return extractor_input == FeatureSource::kSsl || spk_enc_kind == SpkEncKind::kMhfa;
  }

  // Model configuration for an upstream with `layers` outputs (L + 1) of
  // width `dim`.
  ModelConfig model_config(int layers, int dim) const;

  nlohmann::json to_json() const;
  // Unknown keys at any level are a ConfigError; absent keys keep defaults.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

// Reference system `id` (1..7), multiplication fusion, full-scale widths.
RunConfig preset(int id);

// The frozen feature source described by the config, or null when the
// configuration never reads upstream features.
std::unique_ptr<FeatureProvider> make_feature_provider(const RunConfig& config);

}  // namespace tse
