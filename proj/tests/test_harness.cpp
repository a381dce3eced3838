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
#include <sstream>

#include "support/support.hpp"
#include "tse/audio/dataset.hpp"
#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"
#include "tse/harness/checkpoint.hpp"
#include "tse/harness/evaluate.hpp"
#include "tse/harness/run_config.hpp"
#include "tse/harness/samples.hpp"
#include "tse/harness/sv_benchmark.hpp"
#include "tse/harness/trainer.hpp"
#include "tse/nn/params.hpp"

using namespace tse;
using tse_test::TempDir;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Four speakers, 8/4/4 mixtures of 0.5-1 s, built once per process.
const DatasetPaths& tiny_data() {
  static TempDir dir("harness_data");
  static const DatasetPaths paths = [] {
    DatasetOptions o;
    o.num_speakers = 4;
    o.train = 8;
    o.valid = 4;
    o.test = 4;
    o.duration_s = 0.5;
    o.seed = 21;
    return build_dataset(o, dir.path());
  }();
  return paths;
}

RunConfig tiny_config(int system) {
  RunConfig c = preset(system);
  c.upstream.layers = 2;
  c.upstream.dim = 12;
  c.model.blstm_hidden = 6;
  c.model.spk_blstm_hidden = 4;
  c.model.spk_blstm_layers = 1;
  c.model.embed = 6;
  c.model.mhfa_heads = 2;
  c.model.mhfa_compress = 6;
  c.model.conv_filters = 32;
  c.optimizer.epochs = 2;
  c.optimizer.batch_size = 4;
  c.optimizer.crop_s = 0.5;
  c.optimizer.lr = 3e-3;
  c.seed = 5;
  return c;
}

// Deterministic stand-in for the wall clock: advances one second per call.
std::function<double()> ticking_clock() {
  auto t = std::make_shared<double>(0.0);
  return [t] { return *t += 1.0; };
}

TrainResult run(const RunConfig& c, const fs::path& out, std::optional<fs::path> resume = std::nullopt) {
  TrainOptions o;
  o.clock = ticking_clock();
  o.resume = resume;
  return train(c, tiny_data().train, tiny_data().valid, out, o);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("presets reproduce the seven system columns") {
  struct Row {
    EncoderKind enc;
    FeatureSource input;
    SpkEncKind spk;
    MaskKind mask;
    LossKind loss;
  };
  const Row rows[] = {
      {EncoderKind::kStft, FeatureSource::kStft, SpkEncKind::kStftBlstm, MaskKind::kMagnitude, LossKind::kMse},
      {EncoderKind::kStft, FeatureSource::kStft, SpkEncKind::kMhfa, MaskKind::kMagnitude, LossKind::kMse},
      {EncoderKind::kStft, FeatureSource::kSsl, SpkEncKind::kStftBlstm, MaskKind::kMagnitude, LossKind::kMse},
      {EncoderKind::kStft, FeatureSource::kSsl, SpkEncKind::kMhfa, MaskKind::kMagnitude, LossKind::kMse},
      {EncoderKind::kStft, FeatureSource::kSsl, SpkEncKind::kMhfa, MaskKind::kMagnitude, LossKind::kSiSdr},
      {EncoderKind::kStft, FeatureSource::kSsl, SpkEncKind::kMhfa, MaskKind::kComplex, LossKind::kSiSdr},
      {EncoderKind::kLearnable, FeatureSource::kSsl, SpkEncKind::kMhfa, MaskKind::kEncoder, LossKind::kSiSdr},
  };
  for (int id = 1; id <= 7; ++id) {
    CAPTURE(id);
    const RunConfig c = preset(id);
    const Row& r = rows[id - 1];
    CHECK(c.encoder_kind == r.enc);
    CHECK(c.extractor_input == r.input);
    CHECK(c.spk_enc_kind == r.spk);
    CHECK(c.mask_kind == r.mask);
    CHECK(c.loss_kind == r.loss);
    CHECK(c.fusion_kind == FusionKind::kMultiplication);
    CHECK_NOTHROW(c.validate());
    CHECK(c.optimizer.epochs == 200);
    CHECK(c.optimizer.lr == 1e-3);
    CHECK(c.optimizer.grad_clip == 5.0);
    CHECK(c.optimizer.batch_size == 8);
    CHECK(c.optimizer.crop_s == 3.0);
    CHECK(c.model.blstm_hidden == 512);
    CHECK(c.model.mhfa_heads == 4);
    CHECK(c.model.mhfa_compress == 128);
    CHECK(c.model.conv_filters == 512);
  }
  CHECK_THROWS_AS(preset(0), ConfigError);
  CHECK_THROWS_AS(preset(8), ConfigError);
}

TEST_CASE("config validation enforces the realised combinations") {
  RunConfig c = preset(5);
  c.mask_kind = MaskKind::kEncoder;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = preset(7);
  c.mask_kind = MaskKind::kMagnitude;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = preset(7);
  c.mask_kind = MaskKind::kComplex;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = preset(6);
  c.loss_kind = LossKind::kMse;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = preset(5);
  c.optimizer.lr = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config JSON round trip, defaults and unknown keys") {
  for (int id = 1; id <= 7; ++id) {
    RunConfig c = preset(id);
    c.fusion_kind = FusionKind::kFilm;
    c.seed = 99;
    CHECK(RunConfig::from_json(c.to_json()).to_json() == c.to_json());
  }
  const RunConfig partial = RunConfig::from_json(nlohmann::json::parse(R"({"mask_kind":"complex"})"));
  CHECK(partial.mask_kind == MaskKind::kComplex);
  CHECK(partial.optimizer.batch_size == 8);

  for (const char* bad : {R"({"fusion":"film"})", R"({"optimizer":{"learning_rate":0.1}})",
                          R"({"upstream":{"kind":"toy","layer":3}})", R"({"model":{"hidden":3}})",
                          R"({"fusion_kind":"gated"})", R"({"optimizer":{"epochs":"many"}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(bad)), ConfigError);
  }
  TempDir dir("cfg");
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(RunConfig::load(dir / "broken.json"), ConfigError);
}

TEST_CASE("TNSR container round trip and errors") {
  TempDir dir("tnsr");
  Rng rng(1);
  TensorList t;
  t.emplace_back("a.weight", tse_test::random_mat(rng, 3, 4).cast<float>().cast<double>());
  t.emplace_back("b", tse_test::random_mat(rng, 1, 7).cast<float>().cast<double>());
  write_tensors(dir / "x.tnsr", t);
  const TensorList back = read_tensors(dir / "x.tnsr");
  REQUIRE(back.size() == 2);
  CHECK(back[0].first == "a.weight");
  CHECK(back[0].second == t[0].second);
  CHECK(back[1].second == t[1].second);
  // header 12 bytes; per tensor 2 + name + 1 + 8 + 4 n
  CHECK(fs::file_size(dir / "x.tnsr") == 12u + (2 + 8 + 1 + 8 + 48) + (2 + 1 + 1 + 8 + 28));

  std::string bytes = slurp(dir / "x.tnsr");
  std::ofstream(dir / "magic.tnsr", std::ios::binary) << "TNSX" + bytes.substr(4);
  CHECK_THROWS_AS(read_tensors(dir / "magic.tnsr"), FormatError);
  std::ofstream(dir / "cut.tnsr", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS_AS(read_tensors(dir / "cut.tnsr"), CorruptFileError);
  std::ofstream(dir / "tail.tnsr", std::ios::binary) << bytes + "x";
  CHECK_THROWS_AS(read_tensors(dir / "tail.tnsr"), CorruptFileError);
}

TEST_CASE("crops are hop aligned slices of the prepared features") {
  const RunConfig c = tiny_config(7);
  const auto provider = make_feature_provider(c);
  const auto samples = prepare_samples(load_manifest(tiny_data().train), provider.get());
  for (const auto& s : samples) {
    const std::size_t n = crop_positions(s, 4000);
    REQUIRE(n >= 1);
    const PreparedSample cut = crop_sample(s, 4000, n - 1);
    const std::size_t start = (n - 1) * 320;
    CHECK(cut.audio.mixture.size() == std::min<std::size_t>(4000, s.audio.mixture.size()));
    CHECK(cut.audio.mixture.samples.front() == s.audio.mixture.samples[start]);
    CHECK(cut.mixture_features->frames() == static_cast<Eigen::Index>((cut.audio.mixture.size() + 319) / 320));
    CHECK(cut.mixture_features->layers[1].row(0) == s.mixture_features->layers[1].row(start / 320));
    CHECK(cut.enrollment_features->frames() == s.enrollment_features->frames());
    CHECK_THROWS_AS(crop_sample(s, 4000, n), RangeError);
  }
}

TEST_CASE("training lowers the loss, is deterministic and keeps the upstream frozen") {
  TempDir dir("train");
  const RunConfig c = tiny_config(5);
  const TrainResult a = run(c, dir / "a");
  const TrainResult b = run(c, dir / "b");
  REQUIRE(a.curve.size() == 2);
  CHECK(a.curve[1].train_loss < a.curve[0].train_loss);
  CHECK(slurp(dir / "a" / "curve.jsonl") == slurp(dir / "b" / "curve.jsonl"));
  CHECK(slurp(dir / "a" / "last" / "params.tnsr") == slurp(dir / "b" / "last" / "params.tnsr"));

  const auto curve = read_curve(dir / "a" / "curve.jsonl");
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].wall_clock_s < curve[1].wall_clock_s);
  CHECK(curve[1].valid_neg_si_sdr == a.curve[1].valid_neg_si_sdr);

  const ToyUpstream up({c.upstream.seed, c.upstream.layers, c.upstream.dim});
  REQUIRE(a.last.upstream_checksum.has_value());
  CHECK(*a.last.upstream_checksum == up.checksum());
  CHECK(fs::exists(dir / "a" / "config.json"));
  CHECK(RunConfig::load(dir / "a" / "config.json").to_json() == c.to_json());

  // a second fresh run into the same directory would silently append
  CHECK_THROWS_AS(run(c, dir / "a"), ValidationError);
}

TEST_CASE("checkpoint reload reproduces outputs bit for bit") {
  TempDir dir("ckpt");
  const RunConfig c = tiny_config(7);
  const TrainResult r = run(c, dir / "run");
  const Checkpoint loaded = Checkpoint::load(dir / "run" / "last");
  CHECK(loaded.epoch == 2);
  CHECK(loaded.config.to_json() == c.to_json());
  CHECK(loaded.optimizer_steps == r.last.optimizer_steps);
  const auto provider = make_feature_provider(c);
  const auto valid = prepare_samples(load_manifest(tiny_data().valid), provider.get());
  const double v = validation_loss(loaded.model, valid);
  CHECK(v == r.curve.back().valid_neg_si_sdr);
  for (const auto& s : valid) CHECK(loaded.model.forward(s.inputs()).samples == r.last.model.forward(s.inputs()).samples);
  CHECK(r.best.best_valid_loss == std::min(r.curve[0].valid_neg_si_sdr, r.curve[1].valid_neg_si_sdr));

  fs::copy(dir / "run" / "last", dir / "broken");
  TensorList t = read_tensors(dir / "broken" / "params.tnsr");
  t.pop_back();
  write_tensors(dir / "broken" / "params.tnsr", t);
  CHECK_THROWS_AS(Checkpoint::load(dir / "broken"), CorruptFileError);
}

TEST_CASE("resuming continues the run exactly") {
  TempDir dir("resume");
  RunConfig c = tiny_config(6);
  const TrainResult full = run(c, dir / "full");
  RunConfig one = c;
  one.optimizer.epochs = 1;
  run(one, dir / "part");
  // the stored config must match for a resume, so only the epoch budget moves
  Checkpoint ck = Checkpoint::load(dir / "part" / "last");
  ck.config = c;
  ck.save(dir / "part" / "last");
  const TrainResult rest = run(c, dir / "part", dir / "part" / "last");
  REQUIRE(rest.curve.size() == 1);
  CHECK(rest.curve[0].epoch == 2);
  CHECK(rest.curve[0].train_loss == full.curve[1].train_loss);
  CHECK(rest.curve[0].valid_neg_si_sdr == full.curve[1].valid_neg_si_sdr);
  CHECK(read_curve(dir / "part" / "curve.jsonl").size() == 2);

  RunConfig other = c;
  other.optimizer.lr = 1e-2;
  CHECK_THROWS_AS(run(other, dir / "part", dir / "part" / "last"), ConfigError);
}

TEST_CASE("evaluate with oracle estimates") {
  TempDir dir("eval");
  const MetricReport mix = evaluate(nullptr, tiny_data().test, dir / "mix.json", OracleMode::kMixture);
  REQUIRE(mix.per_sample.size() == 4);
  CHECK(std::abs(mix.mean_si_sdri()) <= 1e-6);
  CHECK(mix.failure_rate_pct() == 100.0);
  const MetricReport tgt = evaluate(nullptr, tiny_data().test, "", OracleMode::kTarget);
  for (const auto& s : tgt.per_sample) CHECK(s.si_sdr_est == 100.0);
  CHECK(tgt.failure_rate_pct() == 0.0);

  const auto j = nlohmann::json::parse(std::ifstream(dir / "mix.json"));
  double sum = 0;
  for (const auto& row : j["per_sample"]) sum += row["si_sdri"].get<double>();
  CHECK(std::abs(j["aggregates"]["mean_si_sdri"].get<double>() - sum / 4) <= 1e-9);
  CHECK_THROWS_AS(evaluate(nullptr, tiny_data().test, "", OracleMode::kNone), ConfigError);
  CHECK(oracle_mode_from_string("mixture") == OracleMode::kMixture);
  CHECK_THROWS_AS(oracle_mode_from_string("clean"), ConfigError);
}

TEST_CASE("evaluate a checkpoint and reject mismatched upstreams") {
  TempDir dir("evalck");
  const RunConfig c = tiny_config(4);
  run(c, dir / "run");
  Checkpoint ck = Checkpoint::load(dir / "run" / "best");
  const MetricReport r = evaluate(&ck, tiny_data().test, dir / "r.json");
  REQUIRE(r.per_sample.size() == 4);
  for (const auto& s : r.per_sample) {
    CHECK(std::isfinite(s.si_sdri));
    CHECK(s.si_sdri == doctest::Approx(s.si_sdr_est - s.si_sdr_mix).epsilon(1e-12));
  }
  // multithreaded or not, evaluation is pure
  CHECK(evaluate(&ck, tiny_data().test, "").to_json() == r.to_json());

  Checkpoint wrong_dim = ck;
  wrong_dim.config.upstream.dim = 10;
  CHECK_THROWS_AS(evaluate(&wrong_dim, tiny_data().test, ""), ConfigError);
  Checkpoint wrong_seed = ck;
  wrong_seed.config.upstream.seed += 1;
  CHECK_THROWS_AS(evaluate(&wrong_seed, tiny_data().test, ""), ConfigError);
}

TEST_CASE("layer weight export") {
  TempDir dir("export");
  RunConfig c = tiny_config(7);
  c.optimizer.epochs = 0;
  run(c, dir / "untrained");
  const Checkpoint u = Checkpoint::load(dir / "untrained" / "last");
  export_layer_weights(u, dir / "u.csv");
  const auto rows = read_csv(dir / "u.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"module", "layer_0", "layer_1", "layer_2"});
  CHECK(rows[1][0] == "spk_enc");
  CHECK(rows[2][0] == "extractor");
  for (int r = 1; r <= 2; ++r) {
    REQUIRE(rows[r].size() == 4u);  // L + 2
    for (int k = 1; k <= 3; ++k) CHECK(std::stod(rows[r][k]) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  c.optimizer.epochs = 2;
  run(c, dir / "trained");
  export_layer_weights(Checkpoint::load(dir / "trained" / "last"), dir / "t.csv");
  const auto trained = read_csv(dir / "t.csv");
  for (int r = 1; r <= 2; ++r) {
    double s = 0;
    for (int k = 1; k <= 3; ++k) s += std::stod(trained[r][k]);
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }

  RunConfig stft_only = tiny_config(1);
  stft_only.optimizer.epochs = 0;
  run(stft_only, dir / "s1");
  CHECK_THROWS_AS(export_layer_weights(Checkpoint::load(dir / "s1" / "last"), dir / "s1.csv"), ConfigError);
}

TEST_CASE("SV scoring and trial validation") {
  TempDir dir("sv");
  SvDatasetOptions o;
  o.num_speakers = 4;
  o.train_utterances = 3;
  o.test_utterances = 2;
  o.seed = 4;
  build_sv_dataset(o, dir.path());
  const auto utts = load_speaker_list(dir / "speakers.jsonl");
  const SpeakerUtterance* test_utt = nullptr;
  const SpeakerUtterance* train_utt = nullptr;
  for (const auto& u : utts) (u.split == "test" ? test_utt : train_utt) = &u;
  REQUIRE(test_utt);
  REQUIRE(train_utt);

  SvConfig cfg;
  cfg.upstream.layers = 2;
  cfg.upstream.dim = 8;
  cfg.heads = 2;
  cfg.compress = 4;
  cfg.embed = 4;
  Rng rng(3);
  const MhfaParams p = MhfaParams::init({3, 8, 2, 4, 4}, rng);
  const ToyUpstream up({cfg.upstream.seed, 2, 8});
  std::map<std::string, FeatureStack> feats;
  const std::string key = fs::weakly_canonical(test_utt->path).string();
  feats[key] = up.extract(read_wav(test_utt->path));
  const auto scores = score_trials(p, feats, {{test_utt->path, test_utt->path, TrialLabel::kTarget}});
  REQUIRE(scores.size() == 1);
  CHECK(scores[0] == doctest::Approx(1.0).epsilon(1e-12));

  cfg.epochs = 1;
  std::ofstream(dir / "leak.txt") << fs::relative(train_utt->path, dir.path()).string() << " "
                                  << fs::relative(test_utt->path, dir.path()).string() << " nontarget\n";
  CHECK_THROWS_AS(sv_benchmark(cfg, dir.path(), dir / "leak.txt", ""), ValidationError);

  const SvReport rep = sv_benchmark(cfg, dir.path(), dir / "trials.txt", dir / "report.json");
  CHECK(rep.target_trials > 0);
  CHECK(rep.target_trials == rep.nontarget_trials);
  CHECK(rep.speakers == 4);
  CHECK(rep.train_loss.size() == 1);
  CHECK(rep.eer_pct >= 0.0);
  CHECK(rep.eer_pct <= 100.0);
  CHECK(fs::exists(dir / "report.json"));
}
