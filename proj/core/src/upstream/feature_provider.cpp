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

#include "tse/upstream/feature_provider.hpp"

#include "tse/common/error.hpp"
#include "tse/frontend/stft.hpp"
#include "tse/upstream/feature_file.hpp"

namespace tse {

namespace fs = std::filesystem;

FileFeatureProvider::FileFeatureProvider(fs::path dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_)) throw ConfigError("feature directory " + dir_.string() + " does not exist");
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() != ".lfsc") continue;
    const FeatureStack probe = load_features(entry.path());
    layers_ = probe.num_layers();
    dim_ = static_cast<int>(probe.dim());
    return;
  }
  throw ConfigError("feature directory " + dir_.string() + " holds no .lfsc files");
}

fs::path FileFeatureProvider::feature_path(const fs::path& dir, const fs::path& audio) {
  return dir / (audio.stem().string() + ".lfsc");
}

FeatureStack FileFeatureProvider::features(const fs::path& audio_path, const AudioSignal& audio) const {
  const fs::path p = feature_path(dir_, audio_path);
  if (!fs::exists(p)) throw ValidationError("no precomputed features for " + audio_path.string());
  FeatureStack stack = load_features(p);
  if (stack.num_layers() != layers_ || stack.dim() != dim_)
    throw ConfigError(p.string() + ": feature dimensions differ from the rest of the directory");
  if (stack.frame_hop != kHop) throw ConfigError(p.string() + ": frame hop must be " + std::to_string(kHop));
  if (stack.frames() != static_cast<Eigen::Index>(stft_frame_count(audio.size())))
    throw ConfigError(p.string() + ": frame count does not match the audio length");
  return stack;
}

}  // namespace tse
