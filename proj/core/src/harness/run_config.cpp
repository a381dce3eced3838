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

#include "tse/harness/run_config.hpp"

#include <fstream>
#include <set>

#include "tse/common/error.hpp"

namespace tse {

std::string_view to_string(LossKind k) { return k == LossKind::kMse ? "mse" : "si_sdr"; }

LossKind loss_kind_from_string(std::string_view s) {
  if (s == "mse") return LossKind::kMse;
  if (s == "si_sdr") return LossKind::kSiSdr;
  throw ConfigError("unknown loss kind \"" + std::string(s) + "\"");
}

void RunConfig::validate() const {
  if (mask_kind == MaskKind::kEncoder && encoder_kind != EncoderKind::kLearnable)
    throw ConfigError("mask_kind=encoder requires encoder_kind=learnable");
  if (encoder_kind == EncoderKind::kLearnable && mask_kind != MaskKind::kEncoder)
    throw ConfigError("encoder_kind=learnable requires mask_kind=encoder");
  if (mask_kind == MaskKind::kComplex && encoder_kind != EncoderKind::kStft)
    throw ConfigError("mask_kind=complex requires encoder_kind=stft");
  if (loss_kind == LossKind::kMse && mask_kind != MaskKind::kMagnitude)
    throw ConfigError("loss_kind=mse requires mask_kind=magnitude");
  if (!(optimizer.lr > 0.0)) throw ConfigError("optimizer.lr must be positive");
  if (optimizer.grad_clip < 0.0) throw ConfigError("optimizer.grad_clip must be non-negative");
  if (optimizer.batch_size < 1) throw ConfigError("optimizer.batch_size must be at least 1");
  if (optimizer.epochs < 0) throw ConfigError("optimizer.epochs must be non-negative");
  if (!(optimizer.crop_s > 0.0)) throw ConfigError("optimizer.crop_s must be positive");
  if (upstream.kind == UpstreamConfig::Kind::kToy && (upstream.layers < 1 || upstream.dim < 1))
    throw ConfigError("toy upstream needs layers >= 1 and dim >= 1");
  if (upstream.kind == UpstreamConfig::Kind::kFiles && upstream.dir.empty())
    throw ConfigError("files upstream needs a directory");
  model_config(upstream.layers + 1, upstream.dim).validate();
}

ModelConfig RunConfig::model_config(int layers, int dim) const {
  ModelConfig c;
  c.encoder = encoder_kind;
  c.extractor_input = extractor_input;
  c.spk_enc = spk_enc_kind;
  c.mask = mask_kind;
  c.fusion = fusion_kind;
  c.upstream_layers = layers;
  c.upstream_dim = dim;
  c.blstm_hidden = model.blstm_hidden;
  c.spk_blstm_hidden = model.spk_blstm_hidden;
  c.spk_blstm_layers = model.spk_blstm_layers;
  c.embed = model.embed;
  c.mhfa_heads = model.mhfa_heads;
  c.mhfa_compress = model.mhfa_compress;
  c.conv_filters = model.conv_filters;
  return c;
}

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for \"" + std::string(key) + "\" in " + where);
  }
}

}  // namespace

json RunConfig::to_json() const {
  json up;
  if (upstream.kind == UpstreamConfig::Kind::kToy)
    up = {{"kind", "toy"}, {"seed", upstream.seed}, {"layers", upstream.layers}, {"dim", upstream.dim}};
  else
    up = {{"kind", "files"}, {"dir", upstream.dir.string()}};
  return {{"name", name},
          {"encoder_kind", to_string(encoder_kind)},
          {"mask_kind", to_string(mask_kind)},
          {"fusion_kind", to_string(fusion_kind)},
          {"loss_kind", to_string(loss_kind)},
          {"spk_enc_kind", to_string(spk_enc_kind)},
          {"extractor_input", to_string(extractor_input)},
          {"upstream", up},
          {"optimizer",
           {{"lr", optimizer.lr},
            {"grad_clip", optimizer.grad_clip},
            {"batch_size", optimizer.batch_size},
            {"epochs", optimizer.epochs},
            {"crop_s", optimizer.crop_s}}},
          {"model",
           {{"blstm_hidden", model.blstm_hidden},
            {"spk_blstm_hidden", model.spk_blstm_hidden},
            {"spk_blstm_layers", model.spk_blstm_layers},
            {"embed", model.embed},
            {"mhfa_heads", model.mhfa_heads},
            {"mhfa_compress", model.mhfa_compress},
            {"conv_filters", model.conv_filters}}},
          {"seed", seed}};
}

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j,
             {"name", "encoder_kind", "mask_kind", "fusion_kind", "loss_kind", "spk_enc_kind", "extractor_input",
              "upstream", "optimizer", "model", "seed"},
             "config");
  RunConfig c;
  const std::string top = "config";
  read(j, "name", c.name, top);
  std::string s;
  if (j.contains("encoder_kind")) read(j, "encoder_kind", s, top), c.encoder_kind = encoder_kind_from_string(s);
  if (j.contains("mask_kind")) read(j, "mask_kind", s, top), c.mask_kind = mask_kind_from_string(s);
  if (j.contains("fusion_kind")) read(j, "fusion_kind", s, top), c.fusion_kind = fusion_kind_from_string(s);
  if (j.contains("loss_kind")) read(j, "loss_kind", s, top), c.loss_kind = loss_kind_from_string(s);
  if (j.contains("spk_enc_kind")) read(j, "spk_enc_kind", s, top), c.spk_enc_kind = spk_enc_kind_from_string(s);
  if (j.contains("extractor_input"))
    read(j, "extractor_input", s, top), c.extractor_input = feature_source_from_string(s);
  read(j, "seed", c.seed, top);

  if (j.contains("upstream")) {
    const json& u = j.at("upstream");
    check_keys(u, {"kind", "seed", "layers", "dim", "dir"}, "upstream");
    std::string kind = "toy";
    read(u, "kind", kind, "upstream");
    if (kind == "toy") {
      c.upstream.kind = UpstreamConfig::Kind::kToy;
      if (u.contains("dir")) throw ConfigError("unknown key \"dir\" in toy upstream");
      read(u, "seed", c.upstream.seed, "upstream");
      read(u, "layers", c.upstream.layers, "upstream");
      read(u, "dim", c.upstream.dim, "upstream");
    } else if (kind == "files") {
      c.upstream.kind = UpstreamConfig::Kind::kFiles;
      for (const char* k : {"seed", "layers", "dim"})
        if (u.contains(k)) throw ConfigError("unknown key \"" + std::string(k) + "\" in files upstream");
      std::string dir;
      read(u, "dir", dir, "upstream");
      c.upstream.dir = dir;
    } else {
      throw ConfigError("unknown upstream kind \"" + kind + "\"");
    }
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    check_keys(o, {"lr", "grad_clip", "batch_size", "epochs", "crop_s"}, "optimizer");
    read(o, "lr", c.optimizer.lr, "optimizer");
    read(o, "grad_clip", c.optimizer.grad_clip, "optimizer");
    read(o, "batch_size", c.optimizer.batch_size, "optimizer");
    read(o, "epochs", c.optimizer.epochs, "optimizer");
    read(o, "crop_s", c.optimizer.crop_s, "optimizer");
  }
  if (j.contains("model")) {
    const json& m = j.at("model");
    check_keys(m,
               {"blstm_hidden", "spk_blstm_hidden", "spk_blstm_layers", "embed", "mhfa_heads", "mhfa_compress",
                "conv_filters"},
               "model");
    read(m, "blstm_hidden", c.model.blstm_hidden, "model");
    read(m, "spk_blstm_hidden", c.model.spk_blstm_hidden, "model");
    read(m, "spk_blstm_layers", c.model.spk_blstm_layers, "model");
    read(m, "embed", c.model.embed, "model");
    read(m, "mhfa_heads", c.model.mhfa_heads, "model");
    read(m, "mhfa_compress", c.model.mhfa_compress, "model");
    read(m, "conv_filters", c.model.conv_filters, "model");
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json().dump(2) << "\n";
}

RunConfig preset(int id) {
  RunConfig c;
  c.name = "system" + std::to_string(id);
  c.fusion_kind = FusionKind::kMultiplication;
  c.encoder_kind = EncoderKind::kStft;
  c.mask_kind = MaskKind::kMagnitude;
  switch (id) {
    case 1:
      c.extractor_input = FeatureSource::kStft;
      c.spk_enc_kind = SpkEncKind::kStftBlstm;
      c.loss_kind = LossKind::kMse;
      break;
    case 2:
      c.extractor_input = FeatureSource::kStft;
      c.spk_enc_kind = SpkEncKind::kMhfa;
      c.loss_kind = LossKind::kMse;
      break;
    case 3:
      c.extractor_input = FeatureSource::kSsl;
      c.spk_enc_kind = SpkEncKind::kStftBlstm;
      c.loss_kind = LossKind::kMse;
      break;
    case 4:
      c.extractor_input = FeatureSource::kSsl;
      c.spk_enc_kind = SpkEncKind::kMhfa;
      c.loss_kind = LossKind::kMse;
      break;
    case 5:
      c.extractor_input = FeatureSource::kSsl;
      c.spk_enc_kind = SpkEncKind::kMhfa;
      c.loss_kind = LossKind::kSiSdr;
      break;
    case 6:
      c.extractor_input = FeatureSource::kSsl;
      c.spk_enc_kind = SpkEncKind::kMhfa;
      c.mask_kind = MaskKind::kComplex;
      c.loss_kind = LossKind::kSiSdr;
      break;
    case 7:
      c.extractor_input = FeatureSource::kSsl;
      c.spk_enc_kind = SpkEncKind::kMhfa;
      c.encoder_kind = EncoderKind::kLearnable;
      c.mask_kind = MaskKind::kEncoder;
      c.loss_kind = LossKind::kSiSdr;
      break;
    default:
      throw ConfigError("no preset for system " + std::to_string(id) + " (expected 1-7)");
  }
  return c;
}

std::unique_ptr<FeatureProvider> make_feature_provider(const RunConfig& config) {
  if (!config.needs_upstream()) return nullptr;
  if (config.upstream.kind == UpstreamConfig::Kind::kToy)
    return std::make_unique<ToyFeatureProvider>(
        ToyUpstreamConfig{config.upstream.seed, config.upstream.layers, config.upstream.dim});
  return std::make_unique<FileFeatureProvider>(config.upstream.dir);
}

}  // namespace tse
