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

#include "tse/harness/sv_benchmark.hpp"

#include <fstream>
#include <numeric>
#include <set>

#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"
#include "tse/common/rng.hpp"
#include "tse/metrics/scoring.hpp"
#include "tse/nn/params.hpp"
#include "tse/speaker/am_softmax.hpp"

namespace tse {

namespace fs = std::filesystem;

nlohmann::json SvReport::to_json() const {
  return {{"eer_pct", eer_pct},
          {"untrained_eer_pct", untrained_eer_pct},
          {"target_trials", target_trials},
          {"nontarget_trials", nontarget_trials},
          {"speakers", speakers},
          {"train_utterances", train_utterances},
          {"train_loss", train_loss}};
}

namespace {

std::string key(const fs::path& p) { return fs::weakly_canonical(p).string(); }

// MHFA plus the AM-softmax class matrix, trained together.
struct SvModel {
  MhfaParams mhfa;
  Mat classes;  // C x E

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    mhfa.visit(param_name(prefix, "mhfa"), f);
    f(param_name(prefix, "classes"), classes);
  }
};

}  // namespace

std::vector<double> score_trials(const MhfaParams& mhfa, const std::map<std::string, FeatureStack>& features,
                                 const std::vector<Trial>& trials) {
  std::map<std::string, Mat> cache;
  const auto embed = [&](const fs::path& p) -> const Mat& {
    const std::string k = key(p);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto f = features.find(k);
    if (f == features.end()) throw ValidationError("no features for trial file " + p.string());
    return cache.emplace(k, mhfa_embed(f->second, mhfa)).first->second;
  };
  std::vector<double> scores;
  scores.reserve(trials.size());
  for (const auto& t : trials) scores.push_back(cosine_similarity(embed(t.enroll), embed(t.test)));
  return scores;
}

SvReport sv_benchmark(const SvConfig& config, const fs::path& data_dir, const fs::path& trials_path,
                      const fs::path& report_path) {
  if (config.upstream.kind != UpstreamConfig::Kind::kToy && config.upstream.dir.empty())
    throw ConfigError("files upstream needs a directory");
  if (config.epochs < 0 || config.batch_size < 1 || !(config.lr > 0.0))
    throw ConfigError("SV optimiser settings must be positive");
  const auto utterances = load_speaker_list(data_dir / "speakers.jsonl");
  const auto trials = load_trials(trials_path, trials_path.parent_path());
  if (trials.empty()) throw ValidationError("trial list is empty");

  std::set<std::string> train_files, test_files;
  std::map<std::string, int> speaker_index;
  for (const auto& u : utterances) {
    (u.split == "train" ? train_files : test_files).insert(key(u.path));
    if (u.split == "train") speaker_index.emplace(u.speaker, 0);
  }
  int next = 0;
  for (auto& [name, idx] : speaker_index) idx = next++;
  for (const auto& t : trials)
    for (const fs::path& p : {t.enroll, t.test}) {
      const std::string k = key(p);
      if (train_files.contains(k)) throw ValidationError("trial references training utterance " + p.string());
      if (!test_files.contains(k)) throw ValidationError("trial references unknown utterance " + p.string());
    }
  if (speaker_index.size() < 2) throw ValidationError("SV training needs at least two speakers");

  std::unique_ptr<FeatureProvider> provider;
  if (config.upstream.kind == UpstreamConfig::Kind::kToy)
    provider = std::make_unique<ToyFeatureProvider>(ToyUpstreamConfig{config.upstream.seed, config.upstream.layers, config.upstream.dim});
  else
    provider = std::make_unique<FileFeatureProvider>(config.upstream.dir);

  std::map<std::string, FeatureStack> features;
  std::vector<std::pair<const FeatureStack*, int>> train_set;
  for (const auto& u : utterances) {
    const std::string k = key(u.path);
    auto [it, inserted] = features.emplace(k, provider->features(u.path, read_wav(u.path)));
    if (u.split == "train") train_set.emplace_back(&it->second, speaker_index.at(u.speaker));
  }

  Rng rng(Rng::derive(config.seed, 0x5f));
  SvModel model;
  model.mhfa = MhfaParams::init({provider->num_layers(), provider->dim(), config.heads, config.compress, config.embed}, rng);
  model.classes = Mat(static_cast<Eigen::Index>(speaker_index.size()), config.embed);
  for (Eigen::Index i = 0; i < model.classes.size(); ++i) model.classes.data()[i] = rng.normal();

  const auto split_scores = [&](const std::vector<double>& scores) {
    std::vector<double> tgt, non;
    for (std::size_t i = 0; i < trials.size(); ++i)
      (trials[i].label == TrialLabel::kTarget ? tgt : non).push_back(scores[i]);
    return std::pair{tgt, non};
  };

  SvReport report;
  report.speakers = static_cast<int>(speaker_index.size());
  report.train_utterances = static_cast<int>(train_set.size());
  {
    auto [tgt, non] = split_scores(score_trials(model.mhfa, features, trials));
    report.target_trials = static_cast<int>(tgt.size());
    report.nontarget_trials = static_cast<int>(non.size());
    report.untrained_eer_pct = equal_error_rate(tgt, non);
  }

  SvModel grads = zeros_like(model);
  const auto params = named_parameters(model);
  const auto grad_list = named_parameters(grads);
  AdamOptions ao;
  ao.lr = config.lr;
  Adam adam(params, ao);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng order_rng(Rng::derive(config.seed, 0x5f0, static_cast<std::uint64_t>(epoch)));
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[order_rng.below(i)]);
    double loss_sum = 0.0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t b1 = std::min(order.size(), b0 + static_cast<std::size_t>(config.batch_size));
      set_zero(grads);
      for (std::size_t k = b0; k < b1; ++k) {
        const auto& [stack, label] = train_set[order[k]];
        MhfaCache cache;
        const Mat e = mhfa_embed(*stack, model.mhfa, &cache);
        Mat ge, gw;
        const double loss = am_softmax_loss(e, model.classes, label, config.scale, config.margin, &ge, &gw);
        if (!std::isfinite(loss)) throw TrainingError("non-finite SV loss at epoch " + std::to_string(epoch));
        loss_sum += loss;
        grads.classes += gw;
        mhfa_backward(*stack, model.mhfa, cache, ge, grads.mhfa);
      }
      for (const auto& [name, g] : grad_list) *g /= static_cast<double>(b1 - b0);
      clip_global_norm(grad_list, 5.0);
      adam.step(grad_list);
    }
    report.train_loss.push_back(loss_sum / static_cast<double>(train_set.size()));
  }

  auto [tgt, non] = split_scores(score_trials(model.mhfa, features, trials));
  report.eer_pct = equal_error_rate(tgt, non);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw IoError("cannot write " + report_path.string());
    out << report.to_json().dump(2) << "\n";
  }
  return report;
}

}  // namespace tse
