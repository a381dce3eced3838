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

#include <string>

#include "tse/common/rng.hpp"
#include "tse/frontend/stft.hpp"
#include "tse/nn/linear.hpp"
#include "tse/nn/lstm.hpp"
#include "tse/speaker/mhfa.hpp"

namespace tse {

// Baseline speaker encoder on STFT magnitudes: stacked BLSTM, mean over
// time, linear projection to the embedding dimension.
struct StftSpkEncParams {
  BlstmStack blstm;
  LinearParams proj;

  static StftSpkEncParams init(int bins, int hidden, int layers, int embed, Rng& rng);

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    blstm.visit(param_name(prefix, "blstm"), f);
    proj.visit(param_name(prefix, "proj"), f);
  }
};

struct StftSpkEncCache {
  BlstmStackCache blstm;
  Mat pooled;  // 1 x 2H
};

// `features` is T x F (log-compressed STFT magnitudes in the full model).
SpeakerEmbedding stft_spkenc_embed(const Mat& features, const StftSpkEncParams& params,
                                   StftSpkEncCache* cache = nullptr);
inline SpeakerEmbedding stft_spkenc_embed(const Spectrogram& spec, const StftSpkEncParams& params,
                                          StftSpkEncCache* cache = nullptr) {
  return stft_spkenc_embed(log_magnitude(spec), params, cache);
}

// Accumulates parameter gradients and returns dL/d features.
Mat stft_spkenc_backward(const StftSpkEncParams& params, const StftSpkEncCache& cache, const Mat& grad_embedding,
                         StftSpkEncParams& grads);

}  // namespace tse
