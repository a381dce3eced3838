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
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "tse/harness/checkpoint.hpp"
#include "tse/harness/run_config.hpp"
#include "tse/harness/samples.hpp"

namespace tse {

struct EpochLog {
  int epoch = 0;
  double wall_clock_s = 0.0;
  double train_loss = 0.0;
  double valid_neg_si_sdr = 0.0;

  nlohmann::json to_json() const;
  static EpochLog from_json(const nlohmann::json& j);
};

std::vector<EpochLog> read_curve(const std::filesystem::path& path);

struct TrainOptions {
  // Checkpoint directory to continue from (normally <out>/last).
  std::optional<std::filesystem::path> resume;
  // Seconds since an arbitrary origin; defaults to a steady clock. Tests
  // inject a deterministic clock to compare curve files byte for byte.
  std::function<double()> clock;
  // Progress lines, one per epoch; null for silence.
  std::ostream* log = nullptr;
};

struct TrainResult {
  Checkpoint best;
  Checkpoint last;
  std::vector<EpochLog> curve;  // epochs run by this call
};

// Training loss of one sample. For si_sdr this is -SI-SDR of the estimate;
// for mse it is the spectral MSE between the masked mixture magnitude and
// the target magnitude. With grads set, dLoss/dparams is accumulated there.
double sample_loss(const TseModel& model, const PreparedSample& sample, LossKind loss, TseModel* grads = nullptr);

// Mean negative SI-SDR of full-utterance estimates.
double validation_loss(const TseModel& model, const std::vector<PreparedSample>& samples);

// Joint optimisation of every downstream parameter (the upstream stays
// frozen). Writes <out>/curve.jsonl (one EpochLog per epoch, appended),
// <out>/last and <out>/best checkpoints and <out>/config.json.
TrainResult train(const RunConfig& config, const std::filesystem::path& train_manifest,
                  const std::filesystem::path& valid_manifest, const std::filesystem::path& out_dir,
                  const TrainOptions& options = {});

}  // namespace tse
