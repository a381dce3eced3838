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

#include "tse/audio/signal.hpp"

namespace tse {

// Reads a RIFF/WAVE file holding 16-bit PCM mono audio at 16 kHz. Samples
// are mapped to [-1, 1) by division by 32768.
AudioSignal read_wav(const std::filesystem::path& path);

// Writes 16-bit PCM mono 16 kHz. Samples outside [-1, 1] raise RangeError
// rather than being clipped; 1.0 itself maps to 32767.
void write_wav(const AudioSignal& signal, const std::filesystem::path& path);

}  // namespace tse
