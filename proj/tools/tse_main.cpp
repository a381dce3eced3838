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

// Command-line front end: dataset simulation, training, evaluation,
// layer-weight export, the SV benchmark and feature precomputation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "tse/audio/dataset.hpp"
#include "tse/audio/manifest.hpp"
#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"
#include "tse/harness/checkpoint.hpp"
#include "tse/harness/evaluate.hpp"
#include "tse/harness/run_config.hpp"
#include "tse/harness/sv_benchmark.hpp"
#include "tse/harness/trainer.hpp"
#include "tse/upstream/feature_file.hpp"
#include "tse/upstream/feature_provider.hpp"

namespace fs = std::filesystem;

namespace {

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw tse::ConfigError("expected LO:HI, got \"" + s + "\"");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw tse::ConfigError("expected LO:HI, got \"" + s + "\"");
  }
}

void print_report(const tse::MetricReport& r) {
  std::printf("samples %zu  mean SI-SDRi %.3f dB  mean STOI %.4f  FR %.2f%%\n", r.per_sample.size(), r.mean_si_sdri(),
              r.mean_stoi(), r.failure_rate_pct());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target speech extraction benchmark"};
  app.require_subcommand(1);

  // simulate
  tse::DatasetOptions sim;
  std::string sim_out, sim_snr = "-5:5";
  auto* simulate = app.add_subcommand("simulate", "Synthesise a mixture corpus with train/valid/test manifests");
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--speakers", sim.num_speakers, "Number of synthetic speakers");
  simulate->add_option("--train", sim.train, "Training mixtures");
  simulate->add_option("--valid", sim.valid, "Validation mixtures");
  simulate->add_option("--test", sim.test, "Test mixtures");
  simulate->add_option("--snr", sim_snr, "Target-to-interference SNR range LO:HI in dB");
  simulate->add_option("--duration", sim.duration_s, "Base duration in seconds (sources span 1-2x)");
  simulate->add_option("--seed", sim.seed, "Random seed");

  // simulate-sv
  tse::SvDatasetOptions svsim;
  std::string svsim_out;
  auto* simulate_sv = app.add_subcommand("simulate-sv", "Synthesise a speaker-verification corpus and trial list");
  simulate_sv->add_option("--out", svsim_out, "Output directory")->required();
  simulate_sv->add_option("--speakers", svsim.num_speakers, "Number of speakers");
  simulate_sv->add_option("--train-utts", svsim.train_utterances, "Training utterances per speaker");
  simulate_sv->add_option("--test-utts", svsim.test_utterances, "Test utterances per speaker");
  simulate_sv->add_option("--duration", svsim.duration_s, "Utterance duration in seconds");
  simulate_sv->add_option("--seed", svsim.seed, "Random seed");

  // train
  std::string train_config, train_data, train_out, train_resume;
  int train_epochs = -1;
  auto* train = app.add_subcommand("train", "Train a TSE model");
  train->add_option("--config", train_config, "RunConfig JSON file")->required()->check(CLI::ExistingFile);
  train->add_option("--data", train_data, "Directory with train.jsonl and valid.jsonl")->required();
  train->add_option("--out", train_out, "Run directory")->required();
  train->add_option("--resume", train_resume, "Checkpoint directory to continue from");
  train->add_option("--epochs", train_epochs, "Override optimizer.epochs");

  // evaluate
  std::string eval_ckpt, eval_manifest, eval_report, eval_oracle = "none";
  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint (or an oracle) on a manifest");
  evaluate->add_option("--ckpt", eval_ckpt, "Checkpoint directory");
  evaluate->add_option("--manifest", eval_manifest, "Manifest to evaluate")->required();
  evaluate->add_option("--report", eval_report, "Output JSON report")->required();
  evaluate->add_option("--oracle", eval_oracle, "Replace the estimate: target or mixture")
      ->check(CLI::IsMember({"none", "target", "mixture"}));

  // export-weights
  std::string export_ckpt, export_out;
  auto* export_weights = app.add_subcommand("export-weights", "Write softmax layer weights as CSV");
  export_weights->add_option("--ckpt", export_ckpt, "Checkpoint directory")->required();
  export_weights->add_option("--out", export_out, "Output CSV")->required();

  // sv
  tse::SvConfig sv_config;
  std::string sv_data, sv_trials, sv_report;
  auto* sv = app.add_subcommand("sv", "Train MHFA with AM-softmax and report trial EER");
  sv->add_option("--data", sv_data, "Directory with speakers.jsonl")->required();
  sv->add_option("--trials", sv_trials, "Trial list")->required()->check(CLI::ExistingFile);
  sv->add_option("--report", sv_report, "Output JSON report")->required();
  sv->add_option("--epochs", sv_config.epochs, "Training epochs");
  sv->add_option("--heads", sv_config.heads, "MHFA heads");
  sv->add_option("--seed", sv_config.seed, "Random seed");
  sv->add_option("--upstream-seed", sv_config.upstream.seed, "Toy upstream seed");

  // features
  std::string feat_manifest, feat_out;
  tse::ToyUpstreamConfig feat_upstream;
  auto* features = app.add_subcommand("features", "Precompute toy-upstream LFSC dumps for a manifest");
  features->add_option("--manifest", feat_manifest, "Manifest whose mixtures and enrollments are processed")->required();
  features->add_option("--out", feat_out, "Output directory")->required();
  features->add_option("--upstream-seed", feat_upstream.seed, "Toy upstream seed");
  features->add_option("--layers", feat_upstream.layers, "Transformer-like layers L");
  features->add_option("--dim", feat_upstream.dim, "Feature dimension D");

  // preset
  int preset_id = 7;
  std::string preset_out;
  auto* preset = app.add_subcommand("preset", "Write the RunConfig of a reference system (1-7)");
  preset->add_option("--system", preset_id, "System id 1-7")->required();
  preset->add_option("--out", preset_out, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      std::tie(sim.snr_lo_db, sim.snr_hi_db) = parse_range(sim_snr);
      const auto paths = tse::build_dataset(sim, sim_out);
      std::printf("wrote %s, %s, %s\n", paths.train.c_str(), paths.valid.c_str(), paths.test.c_str());
    } else if (*simulate_sv) {
      tse::build_sv_dataset(svsim, svsim_out);
      std::printf("wrote %s\n", (fs::path(svsim_out) / "trials.txt").c_str());
    } else if (*train) {
      tse::RunConfig config = tse::RunConfig::load(train_config);
      if (train_epochs >= 0) config.optimizer.epochs = train_epochs;
      tse::TrainOptions options;
      options.log = &std::cout;
      if (!train_resume.empty()) options.resume = train_resume;
      const auto result =
          tse::train(config, fs::path(train_data) / "train.jsonl", fs::path(train_data) / "valid.jsonl", train_out, options);
      std::printf("best valid -SI-SDR %.3f dB after %d epochs\n", result.best.best_valid_loss, result.last.epoch);
    } else if (*evaluate) {
      const tse::OracleMode mode = tse::oracle_mode_from_string(eval_oracle);
      std::optional<tse::Checkpoint> ckpt;
      if (!eval_ckpt.empty()) ckpt = tse::Checkpoint::load(eval_ckpt);
      else if (mode == tse::OracleMode::kNone) throw tse::ConfigError("--ckpt is required unless --oracle is given");
      print_report(tse::evaluate(ckpt ? &*ckpt : nullptr, eval_manifest, eval_report, mode));
    } else if (*export_weights) {
      tse::export_layer_weights(tse::Checkpoint::load(export_ckpt), export_out);
      std::printf("wrote %s\n", export_out.c_str());
    } else if (*sv) {
      const auto r = tse::sv_benchmark(sv_config, sv_data, sv_trials, sv_report);
      std::printf("EER %.2f%% (untrained %.2f%%) on %d target / %d nontarget trials\n", r.eer_pct, r.untrained_eer_pct,
                  r.target_trials, r.nontarget_trials);
    } else if (*features) {
      const tse::ToyFeatureProvider provider(feat_upstream);
      fs::create_directories(feat_out);
      std::set<fs::path> done;
      for (const auto& e : tse::load_manifest(feat_manifest))
        for (const fs::path& p : {e.mixture, e.enrollment}) {
          if (!done.insert(p).second) continue;
          tse::store_features(tse::FileFeatureProvider::feature_path(feat_out, p), provider.features(p, tse::read_wav(p)));
        }
      std::printf("wrote %zu feature files to %s\n", done.size(), feat_out.c_str());
    } else if (*preset) {
      tse::preset(preset_id).save(preset_out);
      std::printf("wrote %s\n", preset_out.c_str());
    }
  } catch (const tse::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_validation() ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
