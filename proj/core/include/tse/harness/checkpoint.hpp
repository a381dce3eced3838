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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tse/extractor/tse_model.hpp"
#include "tse/harness/run_config.hpp"

namespace tse {

using TensorList = std::vector<std::pair<std::string, Mat>>;

// TNSR container: "TNSR", u32 version = 1, u32 tensor count, then per tensor
// u16 name length, UTF-8 name, u8 rank, u32 dims, float32 payload. All
// integers little-endian. Matrices are written with rank 2 (rows, cols).
void write_tensors(const std::filesystem::path& path, const TensorList& tensors);
TensorList read_tensors(const std::filesystem::path& path);

struct Checkpoint {
  RunConfig config;
  int epoch = 0;  // completed epochs
  double best_valid_loss = 0.0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double wall_clock_s = 0.0;  // cumulative training time
  std::optional<std::uint64_t> upstream_checksum;
  TseModel model;
  // Optimiser moments (may be empty) and step count.
  TensorList optimizer_state;
  long optimizer_steps = 0;

  // meta.json, params.tnsr and, when present, optim.tnsr.
  void save(const std::filesystem::path& dir) const;
  static Checkpoint load(const std::filesystem::path& dir);
};

}  // namespace tse
