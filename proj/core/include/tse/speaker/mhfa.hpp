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
#include "tse/nn/linear.hpp"
#include "tse/nn/tensor.hpp"
#include "tse/upstream/feature_stack.hpp"

namespace tse {

// A speaker embedding e, stored as a 1 x E row.
using SpeakerEmbedding = Mat;

struct MhfaConfig {
  int num_layers = 5;  // L + 1
  int dim = 192;       // D
  int heads = 4;       // H
  int compress = 128;  // d_c
  int embed = 256;     // E
};

// Multi-head factorised attentive pooling.
//
// Two independent layer weightings of the frozen stack give keys K and
// values V. Both are compressed to d_c channels; each head scores frames
// from the compressed keys, softmax-normalises the scores over time and
// pools the compressed values. The concatenated head outputs are projected
// to the embedding dimension.
struct MhfaParams {
  LayerWeights att_logits;
  LayerWeights feat_logits;
  LinearParams key_compress;    // D -> d_c
  LinearParams value_compress;  // D -> d_c
  LinearParams head_map;        // d_c -> H, no bias (a per-head constant cancels in the softmax)
  LinearParams out_proj;        // H * d_c -> E

  static MhfaParams init(const MhfaConfig& config, Rng& rng);
  int heads() const noexcept { return head_map.out(); }
  int compress() const noexcept { return key_compress.out(); }
  int embed() const noexcept { return out_proj.out(); }

  // 2 (L+1) + 2 (D d_c + d_c) + d_c H + H d_c E + E
  static std::size_t expected_parameter_count(const MhfaConfig& config);

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    att_logits.visit(param_name(prefix, "att"), f);
    feat_logits.visit(param_name(prefix, "feat"), f);
    key_compress.visit(param_name(prefix, "key_compress"), f);
    value_compress.visit(param_name(prefix, "value_compress"), f);
    head_map.visit(param_name(prefix, "head_map"), f);
    out_proj.visit(param_name(prefix, "out_proj"), f);
  }
};

struct MhfaCache {
  Mat keys, values;          // T x D
  Mat keys_c, values_c;      // T x d_c
  Mat attention;             // T x H, columns sum to 1
  Mat pooled;                // 1 x (H d_c), head-major
};

SpeakerEmbedding mhfa_embed(const FeatureStack& stack, const MhfaParams& params, MhfaCache* cache = nullptr);

// Accumulates parameter gradients given dL/de.
void mhfa_backward(const FeatureStack& stack, const MhfaParams& params, const MhfaCache& cache,
                   const Mat& grad_embedding, MhfaParams& grads);

}  // namespace tse
