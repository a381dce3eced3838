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
#include <string>
#include <vector>

#include "tse/audio/signal.hpp"

namespace tse {

// Procedural stand-in for a real talker: a fixed fundamental frequency and
// three formant resonances.
struct SpeakerProfile {
  std::string speaker_id;
  double f0_hz = 120.0;
  std::vector<double> formant_centers_hz;
  std::uint64_t seed = 0;

  void validate() const;
};

// Draws num_speakers profiles with fundamentals spread log-uniformly over
// [85, 280] Hz (one stratum per speaker, randomly permuted) so that any two
// speakers are separated in pitch.
std::vector<SpeakerProfile> make_speaker_profiles(int num_speakers, std::uint64_t seed);

// Voiced harmonic excitation with slow random f0 and amplitude modulation,
// shaped by the profile's formant resonators and peak-normalised to 0.9.
// Deterministic in (profile, utterance_seed).
AudioSignal synth_utterance(const SpeakerProfile& profile, double duration_s, std::uint64_t utterance_seed);

// Amplitude-weighted mean frequency of the magnitude spectrum, in Hz.
double spectral_centroid(const AudioSignal& signal);

}  // namespace tse
