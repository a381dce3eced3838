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
#include <memory>
#include <optional>

#include "tse/audio/signal.hpp"
#include "tse/upstream/feature_stack.hpp"
#include "tse/upstream/toy_upstream.hpp"

namespace tse {

// Source of frozen upstream features for an utterance.
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual FeatureStack features(const std::filesystem::path& audio_path, const AudioSignal& audio) const = 0;
  virtual int num_layers() const = 0;  // L + 1
  virtual int dim() const = 0;
  // Checksum of the frozen parameters, when the provider owns any.
  virtual std::optional<std::uint64_t> checksum() const { return std::nullopt; }
};

class ToyFeatureProvider final : public FeatureProvider {
 public:
  explicit ToyFeatureProvider(const ToyUpstreamConfig& config) : upstream_(config) {}
  FeatureStack features(const std::filesystem::path&, const AudioSignal& audio) const override {
    return upstream_.extract(audio);
  }
  int num_layers() const override { return upstream_.config().layers + 1; }
  int dim() const override { return upstream_.config().dim; }
  std::optional<std::uint64_t> checksum() const override { return upstream_.checksum(); }
  const ToyUpstream& upstream() const noexcept { return upstream_; }

 private:
  ToyUpstream upstream_;
};

// Reads precomputed LFSC dumps: <dir>/<audio stem>.lfsc. Dimensions are
// taken from the first file found in the directory.
class FileFeatureProvider final : public FeatureProvider {
 public:
  explicit FileFeatureProvider(std::filesystem::path dir);
  FeatureStack features(const std::filesystem::path& audio_path, const AudioSignal& audio) const override;
  int num_layers() const override { return layers_; }
  int dim() const override { return dim_; }

  static std::filesystem::path feature_path(const std::filesystem::path& dir, const std::filesystem::path& audio);

 private:
  std::filesystem::path dir_;
  int layers_ = 0;
  int dim_ = 0;
};

}  // namespace tse
