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

#include "tse/audio/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"

namespace tse {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(where + "malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ValidationError(where + "expected a JSON object");
    for (const char* key : {"id", "mixture", "target", "enrollment", "speaker", "interference_speaker", "snr_db"})
      if (!j.contains(key)) throw ValidationError(where + "missing field \"" + key + "\"");
    ManifestEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.mixture = base / j.at("mixture").get<std::string>();
      e.target = base / j.at("target").get<std::string>();
      e.enrollment = base / j.at("enrollment").get<std::string>();
      e.speaker = j.at("speaker").get<std::string>();
      e.interference_speaker = j.at("interference_speaker").get<std::string>();
      e.snr_db = j.at("snr_db").get<double>();
      if (j.contains("rescale")) e.rescale = j.at("rescale").get<double>();
    } catch (const json::exception& ex) {
      throw ValidationError(where + "bad field type (" + ex.what() + ")");
    }
    for (const fs::path* p : {&e.mixture, &e.target, &e.enrollment})
      if (!fs::exists(*p)) throw ValidationError(where + "referenced file does not exist: " + p->string());
    if (e.speaker == e.interference_speaker)
      throw ValidationError(where + "target and interference speaker are identical");
    out.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const ManifestEntry& e : entries) {
    json j;
    j["id"] = e.id;
    j["mixture"] = fs::relative(fs::absolute(e.mixture), base).generic_string();
    j["target"] = fs::relative(fs::absolute(e.target), base).generic_string();
    j["enrollment"] = fs::relative(fs::absolute(e.enrollment), base).generic_string();
    j["speaker"] = e.speaker;
    j["interference_speaker"] = e.interference_speaker;
    j["snr_db"] = e.snr_db;
    j["rescale"] = e.rescale;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

MixtureSample load_sample(const ManifestEntry& entry) {
  MixtureSample s;
  s.id = entry.id;
  s.mixture = read_wav(entry.mixture);
  s.target = read_wav(entry.target);
  s.enrollment = read_wav(entry.enrollment);
  s.target_speaker = entry.speaker;
  s.interference_speaker = entry.interference_speaker;
  s.snr_db = entry.snr_db;
  if (s.mixture.size() != s.target.size())
    throw ValidationError(entry.id + ": mixture and target lengths differ");
  return s;
}

}  // namespace tse
