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

#include "tse/upstream/feature_stack.hpp"

namespace tse {

// LFSC container, little-endian:
//   "LFSC" | u32 version=1 | u32 L+1 | u32 T' | u32 D | u32 frame_hop |
//   u64 source_length | (L+1)*T'*D float32, layer-major, frame-major,
//   channel-minor.
// Values are stored as float32; a stack read from disk round-trips
// bit-exactly.
void store_features(const std::filesystem::path& path, const FeatureStack& stack);
FeatureStack load_features(const std::filesystem::path& path);

}  // namespace tse
