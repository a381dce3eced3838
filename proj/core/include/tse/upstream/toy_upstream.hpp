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
#include <vector>

#include "tse/audio/signal.hpp"
#include "tse/nn/tensor.hpp"
#include "tse/upstream/feature_stack.hpp"

namespace tse {

struct ToyUpstreamConfig {
  std::uint64_t seed = 1234;
  int layers = 4;  // L; the stack holds L + 1 outputs
  int dim = 192;   // D
};

// Deterministic frozen feature extractor standing in for a pretrained
// self-supervised model. Layer 0 is the log magnitude of D random complex
// Gabor filters applied to Hann-windowed frames at stride 320 (centered,
// reflection-padded, aligned with stft_encode). Each further layer applies a
// random frame-local linear map plus a width-3 depthwise temporal
// convolution and tanh. Every layer is standardised to zero mean and unit
// variance over the whole utterance. Parameters are drawn from the seed and
// never change.
class ToyUpstream {
 public:
  explicit ToyUpstream(const ToyUpstreamConfig& config);

  const ToyUpstreamConfig& config() const noexcept { return config_; }

  // Requires length >= 1024. T' = ceil(length / 320).
  FeatureStack extract(std::span<const double> signal) const;
  FeatureStack extract(const AudioSignal& s) const { return extract(s.view()); }

  // FNV-1a over every parameter byte.
  std::uint64_t checksum() const;

 private:
  struct Layer {
    Mat mix;       // D x D
    Mat temporal;  // 3 x D, taps for t-1, t, t+1
    Mat bias;      // 1 x D
  };

  ToyUpstreamConfig config_;
  Mat analysis_cos_;  // 1024 x D
  Mat analysis_sin_;  // 1024 x D
  std::vector<Layer> layers_;
};

FeatureStack toy_upstream(const AudioSignal& signal, std::uint64_t seed, int layers, int dim);

}  // namespace tse
