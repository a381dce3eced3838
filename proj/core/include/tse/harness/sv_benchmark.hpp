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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tse/audio/dataset.hpp"
#include "tse/harness/run_config.hpp"
#include "tse/speaker/mhfa.hpp"

namespace tse {

struct SvConfig {
  UpstreamConfig upstream;
  int heads = 32;
  int compress = 128;
  int embed = 256;
  int epochs = 20;
  int batch_size = 16;
  double lr = 1e-3;
  double scale = 30.0;
  double margin = 0.4;
  std::uint64_t seed = 0;
};

struct SvReport {
  double eer_pct = 0.0;
  double untrained_eer_pct = 0.0;
  int target_trials = 0;
  int nontarget_trials = 0;
  int speakers = 0;
  int train_utterances = 0;
  std::vector<double> train_loss;  // per epoch

  nlohmann::json to_json() const;
};

// Cosine scores of the trials under an MHFA model, given each utterance's
// features keyed by canonical path.
std::vector<double> score_trials(const MhfaParams& mhfa, const std::map<std::string, FeatureStack>& features,
                                 const std::vector<Trial>& trials);

// Trains MHFA + AM-softmax on the train split of <data>/speakers.jsonl and
// reports the EER of the trial list, whose files must all come from the
// test split. Also reports the EER of the untrained model.
SvReport sv_benchmark(const SvConfig& config, const std::filesystem::path& data_dir,
                      const std::filesystem::path& trials_path, const std::filesystem::path& report_path);

}  // namespace tse
