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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tse/audio/manifest.hpp"
#include "tse/extractor/tse_model.hpp"
#include "tse/upstream/feature_provider.hpp"

namespace tse {

// A manifest sample with its upstream features computed once.
struct PreparedSample {
  ManifestEntry entry;
  MixtureSample audio;
  std::optional<FeatureStack> mixture_features;
  std::optional<FeatureStack> enrollment_features;

  TseInputs inputs() const;
};

// Loads every manifest entry; features are extracted when provider is set.
std::vector<PreparedSample> prepare_samples(const std::vector<ManifestEntry>& entries, const FeatureProvider* provider);

// A training crop: `crop_samples` long, starting at a multiple of the
// feature hop so the sliced feature frames stay aligned with the audio.
// Samples no longer than the crop are returned whole.
PreparedSample crop_sample(const PreparedSample& sample, std::size_t crop_samples, std::size_t start_hops);

// Number of valid hop-aligned start positions for a crop.
std::size_t crop_positions(const PreparedSample& sample, std::size_t crop_samples);

}  // namespace tse
