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
#include <string_view>

#include "tse/common/rng.hpp"
#include "tse/nn/linear.hpp"
#include "tse/speaker/mhfa.hpp"

namespace tse {

enum class FusionKind { kAddition, kMultiplication, kConcatenation, kFilm };

std::string_view to_string(FusionKind kind);
FusionKind fusion_kind_from_string(std::string_view name);

// Conditioning layer. The speaker embedding is projected to the MixNet
// width W and broadcast over frames:
//   addition        Z_f = Z_mix + P e
//   multiplication  Z_f = Z_mix (.) P e
//   concatenation   Z_f = [Z_mix, P e] R      (R: 2W -> W)
//   film            Z_f = Z_mix (.) P1 e + P2 e
// Only the maps a kind uses are populated.
struct FusionParams {
  FusionKind kind = FusionKind::kMultiplication;
  LinearParams embed_proj;
  LinearParams concat_reduce;
  LinearParams film_proj1;
  LinearParams film_proj2;

  static FusionParams init(FusionKind kind, int embed, int width, Rng& rng);

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    for (auto [name, lin] : {std::pair{"embed_proj", &embed_proj}, std::pair{"concat_reduce", &concat_reduce},
                             std::pair{"film_proj1", &film_proj1}, std::pair{"film_proj2", &film_proj2}})
      if (lin->weight.size() > 0) lin->visit(param_name(prefix, name), f);
  }
};

struct FusionCache {
  Mat proj1;   // 1 x W: P e, or P1 e for FiLM
  Mat proj2;   // 1 x W: P2 e for FiLM
  Mat concat;  // T x 2W for concatenation
};

// Returns T x W.
Mat fuse(const Mat& z_mix, const SpeakerEmbedding& e, const FusionParams& params, FusionCache* cache = nullptr);

// Accumulates parameter gradients; writes dL/dZ_mix and dL/de.
void fuse_backward(const Mat& z_mix, const SpeakerEmbedding& e, const FusionParams& params, const FusionCache& cache,
                   const Mat& grad_out, FusionParams& grads, Mat& grad_z_mix, Mat& grad_e);

}  // namespace tse
