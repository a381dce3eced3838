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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>

#include "support/support.hpp"
#include "tse/audio/dataset.hpp"
#include "tse/audio/manifest.hpp"
#include "tse/audio/mixing.hpp"
#include "tse/audio/synth.hpp"
#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"

using namespace tse;
using tse_test::TempDir;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void put_u16(std::string& s, unsigned v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string& s, unsigned v) {
  put_u16(s, v & 0xffff);
  put_u16(s, v >> 16);
}

// Hand-built PCM WAV so header handling is checked against bytes we control.
std::string wav_bytes(unsigned channels, unsigned rate, unsigned bits, unsigned frames) {
  const unsigned block = channels * bits / 8;
  std::string s = "RIFF";
  put_u32(s, 36 + frames * block);
  s += "WAVEfmt ";
  put_u32(s, 16);
  put_u16(s, 1);
  put_u16(s, channels);
  put_u32(s, rate);
  put_u32(s, rate * block);
  put_u16(s, block);
  put_u16(s, bits);
  s += "data";
  put_u32(s, frames * block);
  s.append(frames * block, '\0');
  return s;
}

void write_bytes(const fs::path& p, const std::string& b) {
  std::ofstream(p, std::ios::binary) << b;
}

AudioSignal utterance(int speaker, std::uint64_t seed, double dur = 1.0) {
  static const auto profiles = make_speaker_profiles(8, 99);
  return synth_utterance(profiles[static_cast<std::size_t>(speaker)], dur, seed);
}

}  // namespace

TEST_CASE("read_wav of one second of digital silence") {
  TempDir dir("wav");
  write_bytes(dir / "z.wav", wav_bytes(1, 16000, 16, 16000));
  const AudioSignal s = read_wav(dir / "z.wav");
  CHECK(s.size() == 16000);
  CHECK(peak(s.view()) == 0.0);
}

TEST_CASE("read_wav rejects unsupported formats by name") {
  TempDir dir("wav");
  write_bytes(dir / "st.wav", wav_bytes(2, 16000, 16, 100));
  CHECK_THROWS_WITH_AS(read_wav(dir / "st.wav"), doctest::Contains("channels=2"), FormatError);
  write_bytes(dir / "sr.wav", wav_bytes(1, 8000, 16, 100));
  CHECK_THROWS_WITH_AS(read_wav(dir / "sr.wav"), doctest::Contains("sample_rate=8000"), FormatError);
  write_bytes(dir / "b8.wav", wav_bytes(1, 16000, 8, 100));
  CHECK_THROWS_AS(read_wav(dir / "b8.wav"), FormatError);
  std::string cut = wav_bytes(1, 16000, 16, 100);
  cut.resize(cut.size() - 10);
  write_bytes(dir / "cut.wav", cut);
  CHECK_THROWS_AS(read_wav(dir / "cut.wav"), CorruptFileError);
}

TEST_CASE("wav round trip is within one quantisation step") {
  TempDir dir("wav");
  Rng rng(5);
  AudioSignal a(tse_test::random_signal(rng, 4000, 0.99));
  a.samples[0] = 1.0;
  a.samples[1] = -1.0;
  write_wav(a, dir / "a.wav");
  const AudioSignal b = read_wav(dir / "a.wav");
  write_wav(b, dir / "b.wav");
  const AudioSignal c = read_wav(dir / "b.wav");
  REQUIRE(b.size() == a.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.samples[i] - c.samples[i]));
  CHECK(worst <= std::ldexp(1.0, -15));
  CHECK(b.samples == c.samples);
}

TEST_CASE("write_wav refuses to clip and writes zeros as zero PCM") {
  TempDir dir("wav");
  AudioSignal z(std::vector<double>(320, 0.0));
  write_wav(z, dir / "z.wav");
  const std::string bytes = slurp(dir / "z.wav");
  CHECK(bytes.size() == 44 + 640);
  CHECK(bytes.substr(44) == std::string(640, '\0'));
  AudioSignal loud(std::vector<double>{0.0, 1.5});
  CHECK_THROWS_AS(write_wav(loud, dir / "l.wav"), RangeError);
  CHECK_THROWS_AS(write_wav(z, dir / "no" / "such" / "dir.wav"), IoError);
}

TEST_CASE("mix_min truncates to the shorter source") {
  const AudioSignal a = utterance(0, 1, 1.0);
  const AudioSignal b = utterance(1, 2, 0.75);
  const MixResult m = mix_min(a, b, 0.0);
  CHECK(m.mixture.size() == 12000);
  CHECK(m.target.size() == 12000);
  CHECK(m.interference.size() == 12000);
}

TEST_CASE("mix_min with equal energies at 0 dB leaves the interference gain at one") {
  AudioSignal a = utterance(2, 3);
  AudioSignal b = utterance(3, 4);
  const double g = std::sqrt(energy(a.view()) / energy(b.view()));
  for (double& v : b.samples) v *= g * 0.5;
  for (double& v : a.samples) v *= 0.5;
  const MixResult m = mix_min(a, b, 0.0);
  CHECK(m.interference_gain == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mix_min hits the requested SNR and sums exactly over [-20, 20] dB") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const double snr = rng.uniform(-20.0, 20.0);
    const MixResult m = mix_min(utterance(trial % 8, 100 + trial), utterance((trial + 3) % 8, 200 + trial), snr);
    // recompute from the stored components
    double et = 0, ei = 0, dev = 0;
    for (std::size_t i = 0; i < m.mixture.size(); ++i) {
      et += m.target.samples[i] * m.target.samples[i];
      ei += m.interference.samples[i] * m.interference.samples[i];
      dev = std::max(dev, std::abs(m.mixture.samples[i] - m.target.samples[i] - m.interference.samples[i]));
    }
    CHECK(std::abs(10.0 * std::log10(et / ei) - snr) <= 1e-6);
    CHECK(dev <= 1e-9);
    CHECK(peak(m.mixture.view()) <= kClipThreshold + 1e-12);
  }
}

TEST_CASE("mix_min rescales jointly when the sum would clip") {
  AudioSignal a = utterance(0, 7);
  const MixResult m = mix_min(a, a, 0.0);  // coherent sum peaks at 1.8
  CHECK(m.rescale < 1.0);
  CHECK(peak(m.mixture.view()) == doctest::Approx(kClipThreshold));
  CHECK(snr_db(m.target, m.interference) == doctest::Approx(0.0));
}

TEST_CASE("mix_min rejects a silent source") {
  AudioSignal z(std::vector<double>(16000, 0.0));
  CHECK_THROWS_AS(mix_min(z, utterance(0, 1), 0.0), DegenerateInputError);
  CHECK_THROWS_AS(mix_min(utterance(0, 1), z, 0.0), DegenerateInputError);
}

TEST_CASE("synth_utterance is deterministic and speaker dependent") {
  const auto profiles = make_speaker_profiles(8, 3);
  for (const auto& p : profiles) {
    CHECK(p.f0_hz >= 80.0);
    CHECK(p.f0_hz <= 300.0);
    CHECK_NOTHROW(p.validate());
  }
  const AudioSignal a = synth_utterance(profiles[0], 1.0, 42);
  const AudioSignal b = synth_utterance(profiles[0], 1.0, 42);
  CHECK(a.size() == 16000);
  CHECK(a.samples == b.samples);
  CHECK(peak(a.view()) == doctest::Approx(0.9));
  const AudioSignal c = synth_utterance(profiles[1], 1.0, 42);
  CHECK(std::abs(spectral_centroid(a) - spectral_centroid(c)) > 0.0);
  CHECK_THROWS_AS(synth_utterance(profiles[0], 0.25, 1), LengthError);
}

TEST_CASE("build_dataset writes complete, reproducible manifests") {
  TempDir d1("ds"), d2("ds");
  DatasetOptions o;
  o.train = 20;
  o.valid = 5;
  o.test = 5;
  o.seed = 7;
  const DatasetPaths p1 = build_dataset(o, d1.path());
  build_dataset(o, d2.path());
  std::size_t lines = 0;
  for (const auto& m : {p1.train, p1.valid, p1.test}) {
    const auto entries = load_manifest(m);
    lines += entries.size();
    for (const auto& e : entries) {
      CHECK(fs::exists(e.mixture));
      CHECK(fs::exists(e.target));
      CHECK(fs::exists(e.enrollment));
      CHECK(e.speaker != e.interference_speaker);
      CHECK(e.snr_db >= -5.0);
      CHECK(e.snr_db <= 5.0);
      CHECK(e.enrollment != e.target);
    }
  }
  CHECK(lines == 30);
  for (const auto& entry : fs::recursive_directory_iterator(d1.path())) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), d1.path());
    CHECK_MESSAGE(slurp(entry.path()) == slurp(d2.path() / rel), rel.string());
  }
  DatasetOptions bad = o;
  bad.num_speakers = 3;
  CHECK_THROWS_AS(build_dataset(bad, d1 / "bad"), ConfigError);
  bad = o;
  bad.train = 4;
  CHECK_THROWS_AS(build_dataset(bad, d1 / "bad"), ConfigError);
}

TEST_CASE("load_manifest validates lines") {
  TempDir dir("man");
  std::ofstream(dir / "empty.jsonl").close();
  CHECK(load_manifest(dir / "empty.jsonl").empty());

  write_wav(AudioSignal(std::vector<double>(2000, 0.1)), dir / "a.wav");
  const std::string good =
      R"({"id":"x","mixture":"a.wav","target":"a.wav","enrollment":"a.wav","speaker":"s0","interference_speaker":"s1","snr_db":0})";
  std::ofstream(dir / "three.jsonl") << good << "\n" << good << "\n" << good << "\n";
  const auto three = load_manifest(dir / "three.jsonl");
  CHECK(three.size() == 3);
  CHECK(three[0].mixture == fs::absolute(dir / "a.wav"));

  std::ofstream(dir / "missing.jsonl")
      << good << "\n"
      << R"({"id":"y","mixture":"a.wav","target":"a.wav","speaker":"s0","interference_speaker":"s1","snr_db":0})"
      << "\n";
  CHECK_THROWS_WITH_AS(load_manifest(dir / "missing.jsonl"), doctest::Contains(":2"), ValidationError);
  CHECK_THROWS_WITH_AS(load_manifest(dir / "missing.jsonl"), doctest::Contains("enrollment"), ValidationError);

  std::ofstream(dir / "nofile.jsonl")
      << R"({"id":"x","mixture":"gone.wav","target":"a.wav","enrollment":"a.wav","speaker":"s0","interference_speaker":"s1","snr_db":0})"
      << "\n";
  CHECK_THROWS_AS(load_manifest(dir / "nofile.jsonl"), ValidationError);
}
