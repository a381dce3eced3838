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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tse/audio/signal.hpp"
#include "tse/common/rng.hpp"
#include "tse/nn/tensor.hpp"

namespace tse {

inline constexpr int kConvKernel = 1024;
inline constexpr int kConvStride = 320;

// Learnable analysis/synthesis filterbank. encoder is kernel x filters,
// decoder is filters x kernel; neither has a bias.
struct ConvFrontendParams {
  Mat encoder;
  Mat decoder;

  // Uniform in +-1/sqrt(kernel).
  static ConvFrontendParams init(int filters, Rng& rng);

  // Replaces the decoder with the ridge-regression synthesis that maps the
  // encoder output of each calibration frame to that frame weighted by
  // synthesis_window(), so that deconv_decode(conv_encode(x)) ~ x on
  // signals resembling the calibration set.
  void fit_decoder(std::span<const AudioSignal> calibration, double ridge = 1e-6);
  int filters() const noexcept { return static_cast<int>(encoder.cols()); }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(param_name(prefix, "encoder"), encoder);
    f(param_name(prefix, "decoder"), decoder);
  }
};

// Non-negative T x N encoder output.
struct EncodedFeatures {
  Mat frames;
  std::size_t original_length = 0;
  int hop = kConvStride;
};

// Hann window divided by the sum of its hop-shifted copies, so that
// overlap-added frames weighted by it sum to one at every interior sample.
const std::vector<double>& synthesis_window();

// T = floor((length - 1024) / 320) + 1.
std::size_t conv_frame_count(std::size_t length);

// Unpadded strided framing, T x 1024.
Mat frame_signal(std::span<const double> signal);

// ReLU(frames * encoder). Requires length >= 1024.
EncodedFeatures conv_encode(std::span<const double> signal, const Mat& encoder);
inline EncodedFeatures conv_encode(const AudioSignal& s, const Mat& encoder) { return conv_encode(s.view(), encoder); }

// Accumulates dL/d encoder given dL/d features. `frames` is frame_signal(x)
// and `features` the forward output (its positivity pattern is the ReLU gate).
void conv_encode_backward(const Mat& frames, const Mat& features, const Mat& grad_features, Mat& grad_encoder);

// Transposed convolution: overlap-add of features * decoder at stride 320,
// trimmed or zero-padded to `length`.
AudioSignal deconv_decode(const Mat& features, const Mat& decoder, std::size_t length);

// Accumulates dL/d decoder and returns dL/d features.
Mat deconv_decode_backward(const Mat& features, const Mat& decoder, std::span<const double> grad_output,
                           Mat& grad_decoder);

}  // namespace tse
