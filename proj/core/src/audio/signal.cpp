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

#include "tse/audio/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tse/common/error.hpp"

namespace tse {

void AudioSignal::validate() const {
  if (sample_rate != kSampleRate)
    throw FormatError("sample_rate=" + std::to_string(sample_rate) + " (expected 16000)");
  if (samples.empty()) throw LengthError("empty signal");
  for (double v : samples)
    if (!std::isfinite(v)) throw RangeError("non-finite sample");
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double rms(std::span<const double> x) {
  return x.empty() ? 0.0 : std::sqrt(energy(x) / static_cast<double>(x.size()));
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

}  // namespace tse
