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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tse/audio/signal.hpp"
#include "tse/extractor/extractor.hpp"
#include "tse/frontend/conv_frontend.hpp"
#include "tse/frontend/mask.hpp"
#include "tse/frontend/stft.hpp"
#include "tse/speaker/mhfa.hpp"
#include "tse/speaker/stft_spkenc.hpp"
#include "tse/upstream/feature_stack.hpp"

namespace tse {

enum class EncoderKind { kStft, kLearnable };
enum class FeatureSource { kSsl, kStft };
enum class SpkEncKind { kMhfa, kStftBlstm };

std::string_view to_string(EncoderKind kind);
std::string_view to_string(FeatureSource kind);
std::string_view to_string(SpkEncKind kind);
EncoderKind encoder_kind_from_string(std::string_view name);
FeatureSource feature_source_from_string(std::string_view name);
SpkEncKind spk_enc_kind_from_string(std::string_view name);

struct ModelConfig {
  EncoderKind encoder = EncoderKind::kStft;
  FeatureSource extractor_input = FeatureSource::kSsl;
  SpkEncKind spk_enc = SpkEncKind::kMhfa;
  MaskKind mask = MaskKind::kMagnitude;
  FusionKind fusion = FusionKind::kMultiplication;
  int upstream_layers = 5;  // L + 1
  int upstream_dim = 192;
  int blstm_hidden = 512;
  int spk_blstm_hidden = 512;
  int spk_blstm_layers = 3;
  int embed = 256;
  int mhfa_heads = 4;
  int mhfa_compress = 128;
  int conv_filters = 512;

  // Mask kind must live in the encoder's domain.
  void validate() const;
  bool needs_upstream() const noexcept {
    return extractor_input == FeatureSource::kSsl || spk_enc == SpkEncKind::kMhfa;
  }
};

// Inputs for one forward pass. Feature stacks are required only when the
// configuration consumes upstream features on that side.
struct TseInputs {
  std::span<const double> mixture;
  std::span<const double> enrollment;
  const FeatureStack* mixture_features = nullptr;
  const FeatureStack* enrollment_features = nullptr;
};

struct TseForwardCache {
  // speaker side
  SpeakerEmbedding embedding;
  MhfaCache mhfa;
  StftSpkEncCache stft_spkenc;
  // extractor side
  Mat extractor_input;
  ExtractorCache extractor;
  MaskTensor mask;
  Eigen::Index frames = 0;
  // encoder domain
  Spectrogram mixture_spec;     // STFT encoder
  Mat mixture_frames;           // learnable encoder: framed input
  Mat mixture_encoded;          // learnable encoder: Z_y
  Mat masked_encoded;           // learnable encoder: Z_s
  std::size_t length = 0;
};

struct ForwardOptions {
  // Replaces the mask head output with ones (identity path diagnostics).
  bool force_unit_mask = false;
};

// The downstream extraction model: speaker encoder, extractor, and the
// STFT or learnable encoder/decoder pair.
struct TseModel {
  ModelConfig config;
  LayerWeights extractor_weights;  // empty unless extractor_input == ssl
  MhfaParams mhfa;                 // populated when spk_enc == mhfa
  StftSpkEncParams stft_spkenc;    // populated when spk_enc == stft_blstm
  ExtractorParams extractor;
  ConvFrontendParams conv;         // populated when encoder == learnable

  // With the learnable encoder, the decoder is fitted to invert the random
  // encoder on synthetic calibration mixtures; fit_decoder = false skips
  // that (used when the parameters are about to be overwritten).
  static TseModel init(const ModelConfig& config, std::uint64_t seed, bool fit_decoder = true);

  // x_hat, of the mixture's length.
  AudioSignal forward(const TseInputs& in, TseForwardCache* cache = nullptr, const ForwardOptions& options = {}) const;

  SpeakerEmbedding embed_enrollment(const TseInputs& in, TseForwardCache* cache = nullptr) const;

  // Given dL/dx_hat, accumulates dL/dparams into grads.
  void backward(const TseInputs& in, const TseForwardCache& cache, std::span<const double> grad_estimate,
                TseModel& grads) const;
  // Entry point for losses defined on the mask directly (spectral MSE).
  void backward_from_mask(const TseInputs& in, const TseForwardCache& cache, const MaskTensor& grad_mask,
                          TseModel& grads) const;

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    if (extractor_weights.logits.size() > 0) extractor_weights.visit(param_name(prefix, "extractor_weights"), f);
    if (config.spk_enc == SpkEncKind::kMhfa)
      mhfa.visit(param_name(prefix, "mhfa"), f);
    else
      stft_spkenc.visit(param_name(prefix, "stft_spkenc"), f);
    extractor.visit(param_name(prefix, "extractor"), f);
    if (config.encoder == EncoderKind::kLearnable) conv.visit(param_name(prefix, "conv"), f);
  }
};

// Deterministic two-speaker synthetic mixtures used to fit the initial
// learnable decoder.
std::vector<AudioSignal> calibration_mixtures(std::uint64_t seed);

// Convenience wrapper: x_hat = Decoder(M (.) Encoder(y)).
AudioSignal tse_forward(const TseModel& model, const TseInputs& in);

}  // namespace tse
