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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tse {

struct DatasetOptions {
  int num_speakers = 8;
  int train = 200;
  int valid = 40;
  int test = 40;
  double snr_lo_db = -5.0;
  double snr_hi_db = 5.0;
  double duration_s = 1.0;  // enrollment length; sources are drawn in [d, 2d]
  std::uint64_t seed = 0;
};

struct DatasetPaths {
  std::filesystem::path train, valid, test;
};

// Writes <out>/{train,valid,test}/*.wav and <out>/{train,valid,test}.jsonl.
// Every sample gets a freshly synthesised target utterance, interference
// utterance and enrollment utterance, so no utterance is shared between
// samples or splits. Byte-identical output for identical options.
DatasetPaths build_dataset(const DatasetOptions& options, const std::filesystem::path& out_dir);

// Utterance list for speaker verification: one record per file.
struct SpeakerUtterance {
  std::filesystem::path path;  // absolute once loaded
  std::string speaker;
  std::string split;  // "train" or "test"
};

struct SvDatasetOptions {
  int num_speakers = 8;
  int train_utterances = 30;  // per speaker
  int test_utterances = 10;   // per speaker
  double duration_s = 1.0;
  std::uint64_t seed = 0;
};

// Writes <out>/wav/*.wav, <out>/speakers.jsonl and a balanced trial list
// <out>/trials.txt (every same-speaker test pair plus as many random
// different-speaker test pairs).
void build_sv_dataset(const SvDatasetOptions& options, const std::filesystem::path& out_dir);

std::vector<SpeakerUtterance> load_speaker_list(const std::filesystem::path& path);

enum class TrialLabel { kTarget, kNontarget };

struct Trial {
  std::filesystem::path enroll;
  std::filesystem::path test;
  TrialLabel label = TrialLabel::kTarget;
};

// Whitespace-separated "enroll_path test_path target|nontarget" lines, with
// paths relative to base_dir.
std::vector<Trial> load_trials(const std::filesystem::path& path, const std::filesystem::path& base_dir);

}  // namespace tse
