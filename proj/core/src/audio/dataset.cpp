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

#include "tse/audio/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tse/audio/manifest.hpp"
#include "tse/audio/mixing.hpp"
#include "tse/audio/synth.hpp"
#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"
#include "tse/common/rng.hpp"

namespace tse {

namespace fs = std::filesystem;

namespace {

std::string padded(int i, int width = 5) {
  std::string s = std::to_string(i);
  return std::string(width > static_cast<int>(s.size()) ? width - s.size() : 0, '0') + s;
}

// Stream tags; utterance seeds are unique per (split, sample, role).
enum Role : std::uint64_t { kTargetUtt = 1, kInterfUtt = 2, kEnrollUtt = 3, kSampleDraws = 4 };

ManifestEntry make_sample(const DatasetOptions& o, const std::vector<SpeakerProfile>& speakers, int split_tag,
                          int index, const fs::path& split_dir) {
  Rng rng(Rng::derive(o.seed, kSampleDraws, split_tag, index));
  const int n = static_cast<int>(speakers.size());
  const int tgt = index % n;
  int itf = static_cast<int>(rng.below(n - 1));
  if (itf >= tgt) ++itf;
  const double snr = rng.uniform(o.snr_lo_db, o.snr_hi_db);
  const double dur_t = rng.uniform(o.duration_s, 2.0 * o.duration_s);
  const double dur_i = rng.uniform(o.duration_s, 2.0 * o.duration_s);

  const auto utt_seed = [&](std::uint64_t role) { return Rng::derive(o.seed, role, split_tag, index); };
  const AudioSignal target = synth_utterance(speakers[tgt], dur_t, utt_seed(kTargetUtt));
  const AudioSignal interf = synth_utterance(speakers[itf], dur_i, utt_seed(kInterfUtt));
  const AudioSignal enroll = synth_utterance(speakers[tgt], o.duration_s, utt_seed(kEnrollUtt));
  const MixResult mix = mix_min(target, interf, snr);

  ManifestEntry e;
  e.id = split_dir.filename().string() + "_" + padded(index);
  e.mixture = split_dir / (e.id + "_mix.wav");
  e.target = split_dir / (e.id + "_target.wav");
  e.enrollment = split_dir / (e.id + "_enroll.wav");
  e.speaker = speakers[tgt].speaker_id;
  e.interference_speaker = speakers[itf].speaker_id;
  e.snr_db = snr;
  e.rescale = mix.rescale;
  write_wav(mix.mixture, e.mixture);
  write_wav(mix.target, e.target);
  write_wav(enroll, e.enrollment);
  return e;
}

}  // namespace

DatasetPaths build_dataset(const DatasetOptions& o, const fs::path& out_dir) {
  if (o.num_speakers < 4) throw ConfigError("at least 4 speakers are required");
  if (o.train < o.num_speakers)
    throw ConfigError("train count " + std::to_string(o.train) + " cannot cover " + std::to_string(o.num_speakers) +
                      " target speakers");
  if (o.valid < 1 || o.test < 1) throw ConfigError("valid and test counts must be positive");
  if (!(o.snr_lo_db <= o.snr_hi_db)) throw ConfigError("snr range must satisfy lo <= hi");
  if (!(o.duration_s >= 0.5)) throw ConfigError("duration must be at least 0.5 s");

  const std::vector<SpeakerProfile> speakers = make_speaker_profiles(o.num_speakers, o.seed);
  DatasetPaths paths;
  const struct {
    const char* name;
    int count;
    fs::path* manifest;
  } splits[] = {{"train", o.train, &paths.train}, {"valid", o.valid, &paths.valid}, {"test", o.test, &paths.test}};
  int tag = 0;
  for (const auto& split : splits) {
    const fs::path dir = out_dir / split.name;
    fs::create_directories(dir);
    std::vector<ManifestEntry> entries;
    entries.reserve(split.count);
    for (int i = 0; i < split.count; ++i) entries.push_back(make_sample(o, speakers, tag, i, dir));
    *split.manifest = out_dir / (std::string(split.name) + ".jsonl");
    write_manifest(entries, *split.manifest);
    ++tag;
  }
  return paths;
}

void build_sv_dataset(const SvDatasetOptions& o, const fs::path& out_dir) {
  if (o.num_speakers < 2) throw ConfigError("at least 2 speakers are required");
  if (o.train_utterances < 1 || o.test_utterances < 2) throw ConfigError("too few utterances per speaker");
  const std::vector<SpeakerProfile> speakers = make_speaker_profiles(o.num_speakers, o.seed);
  const fs::path wav_dir = out_dir / "wav";
  fs::create_directories(wav_dir);

  std::ofstream list(out_dir / "speakers.jsonl", std::ios::trunc);
  std::vector<std::vector<std::string>> test_files(speakers.size());
  for (std::size_t s = 0; s < speakers.size(); ++s) {
    Rng rng(Rng::derive(o.seed, 0x5f, s));
    const int total = o.train_utterances + o.test_utterances;
    for (int u = 0; u < total; ++u) {
      const bool is_test = u >= o.train_utterances;
      const double dur = rng.uniform(o.duration_s, 2.0 * o.duration_s);
      const AudioSignal sig = synth_utterance(speakers[s], dur, Rng::derive(o.seed, 0x77, s, u));
      const std::string rel = "wav/" + speakers[s].speaker_id + "_" + padded(u, 3) + ".wav";
      write_wav(sig, out_dir / rel);
      nlohmann::json j;
      j["path"] = rel;
      j["speaker"] = speakers[s].speaker_id;
      j["split"] = is_test ? "test" : "train";
      list << j.dump() << '\n';
      if (is_test) test_files[s].push_back(rel);
    }
  }

  std::ofstream trials(out_dir / "trials.txt", std::ios::trunc);
  Rng rng(Rng::derive(o.seed, 0x7a1));
  int targets = 0;
  for (const auto& files : test_files)
    for (std::size_t a = 0; a < files.size(); ++a)
      for (std::size_t b = a + 1; b < files.size(); ++b, ++targets) trials << files[a] << ' ' << files[b] << " target\n";
  const std::size_t n = test_files.size();
  for (int k = 0; k < targets; ++k) {
    const std::size_t s1 = rng.below(n);
    std::size_t s2 = rng.below(n - 1);
    if (s2 >= s1) ++s2;
    const auto& f1 = test_files[s1];
    const auto& f2 = test_files[s2];
    trials << f1[rng.below(f1.size())] << ' ' << f2[rng.below(f2.size())] << " nontarget\n";
  }
}

std::vector<SpeakerUtterance> load_speaker_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<SpeakerUtterance> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      SpeakerUtterance u{base / j.at("path").get<std::string>(), j.at("speaker").get<std::string>(),
                         j.at("split").get<std::string>()};
      if (u.split != "train" && u.split != "test") throw ValidationError(where + "split must be train or test");
      if (!fs::exists(u.path)) throw ValidationError(where + "missing file " + u.path.string());
      out.push_back(std::move(u));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + e.what());
    }
  }
  return out;
}

std::vector<Trial> load_trials(const fs::path& path, const fs::path& base_dir) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Trial> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string a, b, label;
    if (!(ss >> a)) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (!(ss >> b >> label)) throw ValidationError(where + "expected 'enroll test label'");
    Trial t{base_dir / a, base_dir / b, TrialLabel::kTarget};
    if (label == "nontarget")
      t.label = TrialLabel::kNontarget;
    else if (label != "target")
      throw ValidationError(where + "label must be target or nontarget");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace tse
