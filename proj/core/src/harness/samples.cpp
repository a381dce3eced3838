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

#include "tse/harness/samples.hpp"

#include <algorithm>

#include "tse/common/error.hpp"
#include "tse/frontend/stft.hpp"

namespace tse {

TseInputs PreparedSample::inputs() const {
  TseInputs in;
  in.mixture = audio.mixture.view();
  in.enrollment = audio.enrollment.view();
  in.mixture_features = mixture_features ? &*mixture_features : nullptr;
  in.enrollment_features = enrollment_features ? &*enrollment_features : nullptr;
  return in;
}

std::vector<PreparedSample> prepare_samples(const std::vector<ManifestEntry>& entries, const FeatureProvider* provider) {
  std::vector<PreparedSample> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    PreparedSample s;
    s.entry = e;
    s.audio = load_sample(e);
    if (provider) {
      s.mixture_features = provider->features(e.mixture, s.audio.mixture);
      s.enrollment_features = provider->features(e.enrollment, s.audio.enrollment);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t crop_positions(const PreparedSample& sample, std::size_t crop_samples) {
  const std::size_t n = sample.audio.mixture.size();
  if (n <= crop_samples) return 1;
  return (n - crop_samples) / kHop + 1;
}

PreparedSample crop_sample(const PreparedSample& sample, std::size_t crop_samples, std::size_t start_hops) {
  const std::size_t n = sample.audio.mixture.size();
  if (n <= crop_samples) return sample;
  if (start_hops >= crop_positions(sample, crop_samples)) throw RangeError("crop start out of range");
  const std::size_t start = start_hops * kHop;
  PreparedSample c;
  c.entry = sample.entry;
  c.audio = sample.audio;
  const auto cut = [&](const AudioSignal& s) {
    AudioSignal out;
    out.sample_rate = s.sample_rate;
    out.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(start),
                       s.samples.begin() + static_cast<std::ptrdiff_t>(start + crop_samples));
    return out;
  };
  c.audio.mixture = cut(sample.audio.mixture);
  c.audio.target = cut(sample.audio.target);
  c.enrollment_features = sample.enrollment_features;
  if (sample.mixture_features) {
    const Eigen::Index frames = static_cast<Eigen::Index>(stft_frame_count(crop_samples));
    const Eigen::Index begin = static_cast<Eigen::Index>(start_hops);
    const Eigen::Index count = std::min(frames, sample.mixture_features->frames() - begin);
    c.mixture_features = sample.mixture_features->slice_frames(begin, count);
    c.mixture_features->source_length = crop_samples;
  }
  return c;
}

}  // namespace tse
