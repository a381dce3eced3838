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

#include <vector>

#include "tse/audio/signal.hpp"

namespace tse {

// Output of min-mode two-source mixing. mixture is exactly target +
// interference, elementwise, after any joint rescale.
struct MixResult {
  AudioSignal mixture;
  AudioSignal target;
  AudioSignal interference;
  double interference_gain = 1.0;  // applied before the joint rescale
  double rescale = 1.0;            // common factor applied to all components
};

inline constexpr double kClipThreshold = 0.99;

// Truncates both sources to the shorter length, scales the interference so
// that 10 log10(E_target / E_interference) == snr_db over that span, and
// jointly rescales everything if the mixture would exceed kClipThreshold.
MixResult mix_min(const AudioSignal& target, const AudioSignal& interference, double snr_db);

// 10 log10(E_a / E_b).
double snr_db(const AudioSignal& a, const AudioSignal& b);

}  // namespace tse
