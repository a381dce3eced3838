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
#include "tse/extractor/fusion.hpp"
#include "tse/frontend/mask.hpp"
#include "tse/nn/linear.hpp"
#include "tse/nn/lstm.hpp"

namespace tse {

struct ExtractorConfig {
  int input_dim = 192;  // D for upstream features, 513 for STFT features
  int hidden = 512;     // per direction
  int embed = 256;
  FusionKind fusion = FusionKind::kMultiplication;
  MaskKind mask = MaskKind::kMagnitude;
  int mask_width = 513;  // bins (magnitude/complex) or encoder filters
};

// MixNet (1 BLSTM layer) -> fusion with the speaker embedding -> MaskNet
// (2 BLSTM layers) -> linear head. The head emits mask_width channels (ReLU)
// for magnitude and encoder masks, or 2 * mask_width linear channels (real
// then imaginary) for complex masks.
struct ExtractorParams {
  MaskKind mask_kind = MaskKind::kMagnitude;
  BlstmStack mixnet;
  FusionParams fusion;
  BlstmStack masknet;
  LinearParams head;

  static ExtractorParams init(const ExtractorConfig& config, Rng& rng);
  int mask_width() const noexcept {
    return mask_kind == MaskKind::kComplex ? head.out() / 2 : head.out();
  }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    mixnet.visit(param_name(prefix, "mixnet"), f);
    fusion.visit(param_name(prefix, "fusion"), f);
    masknet.visit(param_name(prefix, "masknet"), f);
    head.visit(param_name(prefix, "head"), f);
  }
};

struct ExtractorCache {
  BlstmStackCache mixnet;
  Mat z_mix;
  FusionCache fusion;
  BlstmStackCache masknet;
  Mat head_in;
  Mat head_out;
};

// `features` is T x input_dim.
MaskTensor estimate_mask(const Mat& features, const SpeakerEmbedding& e, const ExtractorParams& params,
                         ExtractorCache* cache = nullptr);

// grad_mask carries dL/dM in the same layout as the mask. Accumulates
// parameter gradients and writes dL/d features and dL/de.
void estimate_mask_backward(const SpeakerEmbedding& e, const ExtractorParams& params, const ExtractorCache& cache,
                            const MaskTensor& grad_mask, ExtractorParams& grads, Mat& grad_features, Mat& grad_e);

}  // namespace tse
