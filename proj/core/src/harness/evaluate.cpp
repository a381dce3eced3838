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

#include "tse/harness/evaluate.hpp"

#include <cstdio>
#include <fstream>

#include "tse/common/error.hpp"
#include "tse/metrics/si_sdr.hpp"
#include "tse/metrics/stoi.hpp"

namespace tse {

std::string_view to_string(OracleMode m) {
  switch (m) {
    case OracleMode::kNone: return "none";
    case OracleMode::kTarget: return "target";
    case OracleMode::kMixture: return "mixture";
  }
  return "none";
}

OracleMode oracle_mode_from_string(std::string_view s) {
  if (s == "none") return OracleMode::kNone;
  if (s == "target") return OracleMode::kTarget;
  if (s == "mixture") return OracleMode::kMixture;
  throw ConfigError("unknown oracle mode \"" + std::string(s) + "\"");
}

namespace {

SampleMetrics score(const std::string& id, const AudioSignal& estimate, const MixtureSample& s) {
  SampleMetrics m;
  m.id = id;
  m.si_sdr_mix = si_sdr(s.mixture, s.target);
  m.si_sdr_est = si_sdr(estimate, s.target);
  m.si_sdri = si_sdri(estimate.view(), s.target.view(), s.mixture.view());
  m.stoi = stoi(estimate, s.target);
  return m;
}

}  // namespace

MetricReport evaluate_model(const TseModel& model, const std::vector<PreparedSample>& samples) {
  MetricReport r;
  for (const auto& s : samples) r.per_sample.push_back(score(s.entry.id, tse_forward(model, s.inputs()), s.audio));
  return r;
}

MetricReport evaluate(const Checkpoint* checkpoint, const std::filesystem::path& manifest,
                      const std::filesystem::path& report_path, OracleMode mode) {
  const auto entries = load_manifest(manifest);
  if (entries.empty()) throw ValidationError("manifest " + manifest.string() + " is empty");
  MetricReport report;
  if (mode != OracleMode::kNone) {
    for (const auto& e : entries) {
      const MixtureSample s = load_sample(e);
      report.per_sample.push_back(score(e.id, mode == OracleMode::kTarget ? s.target : s.mixture, s));
    }
  } else {
    if (!checkpoint) throw ConfigError("evaluation without an oracle needs a checkpoint");
    const auto provider = make_feature_provider(checkpoint->config);
    if (provider) {
      if (provider->num_layers() != checkpoint->model.config.upstream_layers ||
          provider->dim() != checkpoint->model.config.upstream_dim)
        throw ConfigError("upstream features are " + std::to_string(provider->num_layers()) + " x " +
                          std::to_string(provider->dim()) + " but the checkpoint expects " +
                          std::to_string(checkpoint->model.config.upstream_layers) + " x " +
                          std::to_string(checkpoint->model.config.upstream_dim));
      if (checkpoint->upstream_checksum && provider->checksum() && *provider->checksum() != *checkpoint->upstream_checksum)
        throw ConfigError("upstream checksum differs from the one recorded in the checkpoint");
    }
    report = evaluate_model(checkpoint->model, prepare_samples(entries, provider.get()));
  }
  if (!report_path.empty()) {
    if (report_path.has_parent_path()) std::filesystem::create_directories(report_path.parent_path());
    std::ofstream out(report_path);
    if (!out) throw IoError("cannot write " + report_path.string());
    out << report.to_json().dump(2) << "\n";
  }
  return report;
}

void export_layer_weights(const Checkpoint& checkpoint, const std::filesystem::path& out_csv) {
  const TseModel& m = checkpoint.model;
  std::vector<std::pair<std::string, Vec>> rows;
  if (m.config.spk_enc == SpkEncKind::kMhfa) rows.emplace_back("spk_enc", m.mhfa.feat_logits.normalized());
  if (m.config.extractor_input == FeatureSource::kSsl) rows.emplace_back("extractor", m.extractor_weights.normalized());
  if (rows.empty()) throw ConfigError("this system reads no upstream features, so it has no layer weights");
  const Eigen::Index n = rows.front().second.size();
  for (const auto& [name, w] : rows)
    if (w.size() != n || n < 1) throw CorruptFileError("layer weight rows have inconsistent lengths");

  std::ofstream out(out_csv);
  if (!out) throw IoError("cannot write " + out_csv.string());
  out << "module";
  for (Eigen::Index l = 0; l < n; ++l) out << ",layer_" << l;
  out << "\n";
  char buf[32];
  for (const auto& [name, w] : rows) {
    out << name;
    for (Eigen::Index l = 0; l < n; ++l) {
      std::snprintf(buf, sizeof buf, "%.17g", w[l]);
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + out_csv.string());
}

}  // namespace tse
