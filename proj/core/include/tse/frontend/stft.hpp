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
#include <vector>

#include "tse/audio/signal.hpp"
#include "tse/nn/tensor.hpp"

namespace tse {

inline constexpr int kFftSize = 1024;
inline constexpr int kHop = 320;
inline constexpr int kNumBins = kFftSize / 2 + 1;

// One-sided STFT, T x 513.
struct Spectrogram {
  CMat frames;
  std::size_t original_length = 0;
  int hop = kHop;

  Eigen::Index num_frames() const noexcept { return frames.rows(); }
};

// Periodic Hann window of length kFftSize.
const std::vector<double>& hann_window();

// Centered framing: T = ceil(length / hop).
std::size_t stft_frame_count(std::size_t length);

// Hann window 1024, hop 320, FFT 1024, signal reflection-padded by 512 on
// both sides. Requires length >= 1024.
Spectrogram stft_encode(std::span<const double> signal);
inline Spectrogram stft_encode(const AudioSignal& s) { return stft_encode(s.view()); }

// Weighted overlap-add with the analysis window as synthesis window,
// normalised by the window-square sum, trimmed or zero-padded to `length`.
AudioSignal istft_decode(const Spectrogram& spec, std::size_t length);

// Adjoint of istft_decode with respect to the complex frames. Given dL/dx for
// the decoded samples, returns G with Re G = dL/dRe Z and Im G = dL/dIm Z.
CMat istft_backward(std::span<const double> grad_output, Eigen::Index num_frames);

// log(1 + |Z|), the compressed magnitude fed to the STFT-input networks.
Mat log_magnitude(const Spectrogram& spec);

// |Z|
Mat magnitude(const Spectrogram& spec);

}  // namespace tse
