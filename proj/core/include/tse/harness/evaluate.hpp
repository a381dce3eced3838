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
#include <string_view>

#include "tse/harness/checkpoint.hpp"
#include "tse/harness/samples.hpp"
#include "tse/metrics/scoring.hpp"

namespace tse {

enum class OracleMode { kNone, kTarget, kMixture };
std::string_view to_string(OracleMode mode);
OracleMode oracle_mode_from_string(std::string_view name);

// Per-sample SI-SDR, SI-SDRi and STOI over a manifest. With an oracle mode
// the estimate is replaced by the target or the mixture and no model is
// needed (checkpoint may be null). Writes the report as JSON when
// report_path is non-empty.
MetricReport evaluate(const Checkpoint* checkpoint, const std::filesystem::path& manifest,
                      const std::filesystem::path& report_path, OracleMode mode = OracleMode::kNone);

// Evaluates an in-memory model on prepared samples.
MetricReport evaluate_model(const TseModel& model, const std::vector<PreparedSample>& samples);

// Writes module,layer_0,...,layer_L followed by one row of softmax weights
// per module that reads upstream features: spk_enc (the MHFA value-branch
// weights) and extractor.
void export_layer_weights(const Checkpoint& checkpoint, const std::filesystem::path& out_csv);

}  // namespace tse
