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

#include "tse/audio/mixing.hpp"

#include <algorithm>
#include <cmath>

#include "tse/common/error.hpp"

namespace tse {

MixResult mix_min(const AudioSignal& target, const AudioSignal& interference, double snr) {
  target.validate();
  interference.validate();
  const std::size_t n = std::min(target.size(), interference.size());
  std::span<const double> t(target.samples.data(), n);
  std::span<const double> i(interference.samples.data(), n);
  const double et = energy(t);
  const double ei = energy(i);
  if (et <= 0.0) throw DegenerateInputError("target is silent over the mixed span");
  if (ei <= 0.0) throw DegenerateInputError("interference is silent over the mixed span");

  MixResult r;
  r.interference_gain = std::sqrt(et / (ei * std::pow(10.0, snr / 10.0)));
  r.target.samples.assign(t.begin(), t.end());
  r.interference.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.interference.samples[k] = r.interference_gain * i[k];

  double p = 0.0;
  for (std::size_t k = 0; k < n; ++k) p = std::max(p, std::abs(r.target.samples[k] + r.interference.samples[k]));
  if (p > kClipThreshold) {
    r.rescale = kClipThreshold / p;
    for (double& v : r.target.samples) v *= r.rescale;
    for (double& v : r.interference.samples) v *= r.rescale;
  }
  r.mixture.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.mixture.samples[k] = r.target.samples[k] + r.interference.samples[k];
  return r;
}

double snr_db(const AudioSignal& a, const AudioSignal& b) {
  return 10.0 * std::log10(energy(a.view()) / energy(b.view()));
}

}  // namespace tse
