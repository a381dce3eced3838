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

#include <string_view>

#include "tse/frontend/conv_frontend.hpp"
#include "tse/frontend/stft.hpp"

namespace tse {

enum class MaskKind { kMagnitude, kComplex, kEncoder };

std::string_view to_string(MaskKind kind);
MaskKind mask_kind_from_string(std::string_view name);

// Multiplicative mask M. `real` holds the magnitude/encoder mask or the real
// channel of a complex mask; `imag` is only populated for complex masks.
struct MaskTensor {
  MaskKind kind = MaskKind::kMagnitude;
  Mat real;
  Mat imag;

  static MaskTensor ones(MaskKind kind, Eigen::Index frames, Eigen::Index width);
};

// Magnitude: |out| = M |Z| with the mixture phase. Complex: out = M * Z.
Spectrogram apply_mask(const Spectrogram& features, const MaskTensor& mask);
// Encoder: out = M (.) Z.
EncodedFeatures apply_mask(const EncodedFeatures& features, const MaskTensor& mask);

}  // namespace tse
