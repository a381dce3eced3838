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
#include <string>
#include <vector>

#include "tse/audio/signal.hpp"

namespace tse {

// One line of a mixture manifest. Paths are stored relative to the
// manifest's directory on disk and resolved to absolute paths on load.
struct ManifestEntry {
  std::string id;
  std::filesystem::path mixture;
  std::filesystem::path target;
  std::filesystem::path enrollment;
  std::string speaker;
  std::string interference_speaker;
  double snr_db = 0.0;
  double rescale = 1.0;  // optional field, written by build_dataset
};

// A manifest entry with its audio loaded.
struct MixtureSample {
  std::string id;
  AudioSignal mixture;
  AudioSignal target;
  AudioSignal enrollment;
  std::string target_speaker;
  std::string interference_speaker;
  double snr_db = 0.0;
};

// Parses a JSON-lines manifest. Missing fields, malformed JSON, or
// referenced files that do not exist raise ValidationError naming the
// 1-based line number.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

MixtureSample load_sample(const ManifestEntry& entry);

}  // namespace tse
