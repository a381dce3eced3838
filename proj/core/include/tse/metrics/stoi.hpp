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

#include <span>
#include <vector>

#include "tse/audio/signal.hpp"

namespace tse {

// Classic short-time objective intelligibility. Both signals are resampled
// to 10 kHz, frames more than 40 dB below the loudest reference frame are
// dropped, 15 one-third-octave band envelopes from 150 Hz are compared over
// 30-frame (384 ms) segments with the -15 dB clipping bound, and the
// correlations are averaged. Requires equal lengths of at least 0.5 s.
double stoi(std::span<const double> estimate, std::span<const double> reference, int sample_rate = kSampleRate);
inline double stoi(const AudioSignal& estimate, const AudioSignal& reference) {
  return stoi(estimate.view(), reference.view(), reference.sample_rate);
}

// Rational resampler by up/down with the Kaiser-windowed sinc design used by
// Octave's resample (60 dB rejection).
std::vector<double> resample_poly(std::span<const double> x, int up, int down);

}  // namespace tse
