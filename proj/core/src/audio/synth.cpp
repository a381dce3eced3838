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

#include "tse/audio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tse/common/error.hpp"
#include "tse/common/rng.hpp"
#include "tse/frontend/stft.hpp"

namespace tse {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPeak = 0.9;
constexpr double kMaxHarmonicHz = 7000.0;

// Two-pole resonator with unit gain at its centre frequency.
struct Resonator {
  double b0, a1, a2;
  double y1 = 0.0, y2 = 0.0;

  Resonator(double freq, double bandwidth) {
    const double r = std::exp(-std::numbers::pi * bandwidth / kSampleRate);
    const double w = kTwoPi * freq / kSampleRate;
    a1 = 2.0 * r * std::cos(w);
    a2 = -r * r;
    b0 = (1.0 - r) * std::sqrt(1.0 - 2.0 * r * std::cos(2.0 * w) + r * r);
  }
  double step(double x) {
    const double y = b0 * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

void SpeakerProfile::validate() const {
  if (!(f0_hz >= 80.0 && f0_hz <= 300.0)) throw ConfigError(speaker_id + ": f0 outside [80, 300] Hz");
  for (std::size_t k = 0; k < formant_centers_hz.size(); ++k) {
    const double f = formant_centers_hz[k];
    if (!(f > 0.0 && f < kSampleRate / 2.0)) throw ConfigError(speaker_id + ": formant above Nyquist");
    if (k > 0 && f <= formant_centers_hz[k - 1]) throw ConfigError(speaker_id + ": formants not increasing");
  }
}

std::vector<SpeakerProfile> make_speaker_profiles(int num_speakers, std::uint64_t seed) {
  if (num_speakers < 1) throw ConfigError("num_speakers must be positive");
  Rng rng(Rng::derive(seed, 0x5be4));
  std::vector<int> strata(num_speakers);
  for (int k = 0; k < num_speakers; ++k) strata[k] = k;
  for (int k = num_speakers - 1; k > 0; --k) std::swap(strata[k], strata[rng.below(k + 1)]);

  std::vector<SpeakerProfile> out;
  const double lo = std::log(85.0), hi = std::log(280.0);
  for (int k = 0; k < num_speakers; ++k) {
    SpeakerProfile p;
    char id[16];
    std::snprintf(id, sizeof id, "spk%02d", k);
    p.speaker_id = id;
    const double u = (strata[k] + 0.25 + 0.5 * rng.uniform()) / num_speakers;
    p.f0_hz = std::exp(lo + u * (hi - lo));
    p.formant_centers_hz = {rng.uniform(300.0, 850.0), rng.uniform(900.0, 2300.0), rng.uniform(2400.0, 3400.0)};
    p.seed = Rng::derive(seed, 0x9a11, k);
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

AudioSignal synth_utterance(const SpeakerProfile& profile, double duration_s, std::uint64_t utterance_seed) {
  if (!(duration_s >= 0.5)) throw LengthError("utterance duration must be at least 0.5 s");
  profile.validate();
  Rng rng(Rng::derive(profile.seed, utterance_seed));
  const auto n = static_cast<std::size_t>(std::llround(duration_s * kSampleRate));

  // Slow f0 drift: three low-frequency sinusoids, about +-8 % in total.
  double fm_rate[3], fm_phase[3], fm_depth[3];
  for (int k = 0; k < 3; ++k) {
    fm_rate[k] = rng.uniform(0.2, 3.0);
    fm_phase[k] = rng.uniform(0.0, kTwoPi);
    fm_depth[k] = rng.uniform(0.01, 0.03);
  }
  // Syllabic amplitude envelope with deep dips.
  const double am_rate = rng.uniform(2.5, 5.0);
  const double am_phase = rng.uniform(0.0, kTwoPi);
  const double am_rate2 = rng.uniform(0.3, 1.2);
  const double am_phase2 = rng.uniform(0.0, kTwoPi);

  const double f0_max = profile.f0_hz * 1.1;
  const int harmonics = std::max(1, static_cast<int>(kMaxHarmonicHz / f0_max));
  std::vector<double> harm_phase(harmonics), harm_amp(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    harm_phase[h] = rng.uniform(0.0, kTwoPi);
    harm_amp[h] = std::pow(h + 1.0, -0.7) * rng.uniform(0.8, 1.2);
  }

  std::vector<double> x(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    double drift = 0.0;
    for (int k = 0; k < 3; ++k) drift += fm_depth[k] * std::sin(kTwoPi * fm_rate[k] * t + fm_phase[k]);
    phase += kTwoPi * profile.f0_hz * (1.0 + drift) / kSampleRate;
    double v = 0.0;
    for (int h = 0; h < harmonics; ++h) v += harm_amp[h] * std::sin((h + 1) * phase + harm_phase[h]);
    const double syll = 0.5 + 0.5 * std::sin(kTwoPi * am_rate * t + am_phase);
    const double slow = 0.75 + 0.25 * std::sin(kTwoPi * am_rate2 * t + am_phase2);
    x[i] = v * std::pow(syll, 1.5) * slow + 0.02 * rng.normal();
  }

  const double bandwidths[] = {90.0, 120.0, 170.0};
  for (std::size_t k = 0; k < profile.formant_centers_hz.size(); ++k) {
    Resonator r(profile.formant_centers_hz[k], bandwidths[std::min<std::size_t>(k, 2)]);
    for (double& v : x) v = r.step(v);
  }

  const double p = peak(x);
  if (p > 0.0)
    for (double& v : x) v *= kPeak / p;
  return AudioSignal(std::move(x));
}

double spectral_centroid(const AudioSignal& signal) {
  const Spectrogram spec = stft_encode(signal);
  double num = 0.0, den = 0.0;
  for (Eigen::Index t = 0; t < spec.frames.rows(); ++t)
    for (Eigen::Index f = 0; f < spec.frames.cols(); ++f) {
      const double m = std::abs(spec.frames(t, f));
      num += m * f * static_cast<double>(kSampleRate) / kFftSize;
      den += m;
    }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace tse
