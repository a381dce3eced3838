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

namespace tse {

inline constexpr int kSampleRate = 16000;

// Mono waveform at 16 kHz.
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  AudioSignal() = default;
  explicit AudioSignal(std::vector<double> s) : samples(std::move(s)) {}

  std::size_t size() const noexcept { return samples.size(); }
  std::span<const double> view() const noexcept { return samples; }

  // Throws if the sample rate is not 16 kHz, the signal is empty, or any
  // sample is non-finite.
  void validate() const;
};

double energy(std::span<const double> x);
double rms(std::span<const double> x);
double peak(std::span<const double> x);

}  // namespace tse
