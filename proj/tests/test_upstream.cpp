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

#include "support/support.hpp"
#include "tse/audio/wav.hpp"
#include "tse/common/error.hpp"
#include "tse/frontend/stft.hpp"
#include "tse/upstream/feature_file.hpp"
#include "tse/upstream/feature_provider.hpp"
#include "tse/upstream/toy_upstream.hpp"

using namespace tse;
using tse_test::TempDir;
namespace fs = std::filesystem;

TEST_CASE("toy upstream is deterministic, aligned with the STFT and standardised") {
  Rng rng(1);
  const AudioSignal x(tse_test::random_signal(rng, 16000));
  const FeatureStack a = toy_upstream(x, 1234, 4, 32);
  const FeatureStack b = toy_upstream(x, 1234, 4, 32);
  REQUIRE(a.num_layers() == 5);
  CHECK(a.frames() == 50);
  CHECK(a.frames() == stft_encode(x).num_frames());
  CHECK(a.dim() == 32);
  for (int l = 0; l < 5; ++l) {
    CHECK(a.layers[l] == b.layers[l]);
    CHECK(std::abs(a.layers[l].mean()) < 1e-9);
    const double var = (a.layers[l].array() - a.layers[l].mean()).square().mean();
    CHECK(var == doctest::Approx(1.0).epsilon(1e-6));
  }
  const FeatureStack c = toy_upstream(x, 1235, 4, 32);
  double diff = 0;
  for (int l = 0; l < 5; ++l) diff = std::max(diff, (a.layers[l] - c.layers[l]).cwiseAbs().maxCoeff());
  CHECK(diff > 0.0);
  CHECK_THROWS_AS(toy_upstream(AudioSignal(std::vector<double>(1000, 0.1)), 1, 4, 8), LengthError);
}

TEST_CASE("toy upstream checksum depends only on the configuration") {
  const ToyUpstream a({1234, 4, 32}), b({1234, 4, 32}), c({99, 4, 32});
  CHECK(a.checksum() == b.checksum());
  CHECK(a.checksum() != c.checksum());
  Rng rng(2);
  (void)a.extract(tse_test::random_signal(rng, 5000));
  CHECK(a.checksum() == b.checksum());
}

TEST_CASE("LFSC round trip is bit exact") {
  TempDir dir("lfsc");
  Rng rng(3);
  FeatureStack s = tse_test::random_stack(rng, 3, 10, 6);
  for (auto& l : s.layers) l = l.cast<float>().cast<double>();
  s.source_length = 3100;
  store_features(dir / "a.lfsc", s);
  const FeatureStack t = load_features(dir / "a.lfsc");
  CHECK(t.source_length == 3100);
  CHECK(t.frame_hop == 320);
  REQUIRE(t.num_layers() == 3);
  for (int l = 0; l < 3; ++l) CHECK(t.layers[l] == s.layers[l]);
  CHECK(fs::file_size(dir / "a.lfsc") == 32u + 3u * 10u * 6u * 4u);
}

TEST_CASE("LFSC format and corruption errors") {
  TempDir dir("lfsc");
  Rng rng(4);
  const FeatureStack s = tse_test::random_stack(rng, 2, 10, 4);
  store_features(dir / "a.lfsc", s);
  {
    std::fstream f(dir / "a.lfsc", std::ios::in | std::ios::out | std::ios::binary);
    f.write("LFSX", 4);
  }
  CHECK_THROWS_AS(load_features(dir / "a.lfsc"), FormatError);

  store_features(dir / "b.lfsc", s);
  {
    std::fstream f(dir / "b.lfsc", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    const char v2[4] = {2, 0, 0, 0};
    f.write(v2, 4);
  }
  CHECK_THROWS_AS(load_features(dir / "b.lfsc"), FormatError);

  // header says 10 frames, payload holds 9
  store_features(dir / "c.lfsc", s);
  fs::resize_file(dir / "c.lfsc", 32 + 2 * 9 * 4 * 4);
  CHECK_THROWS_AS(load_features(dir / "c.lfsc"), CorruptFileError);
}

TEST_CASE("weighted layer sum special cases") {
  Rng rng(5);
  const FeatureStack s = tse_test::random_stack(rng, 5, 7, 3);
  Mat mean = Mat::Zero(7, 3);
  for (const auto& l : s.layers) mean += l / 5.0;
  CHECK((weighted_layer_sum(s, LayerWeights::zeros(5)) - mean).cwiseAbs().maxCoeff() < 1e-12);
  for (int k = 0; k < 5; ++k) {
    LayerWeights w = LayerWeights::zeros(5);
    w.logits(0, k) = 20.0;
    CHECK((weighted_layer_sum(s, w) - s.layers[k]).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK_THROWS_AS(weighted_layer_sum(s, LayerWeights::zeros(4)), ShapeError);
}

TEST_CASE("weighted layer sum matches the high-precision oracle") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const int L = 2 + static_cast<int>(rng.below(6));
    const FeatureStack s = tse_test::random_stack(rng, L, 1 + rng.below(6), 1 + rng.below(5));
    LayerWeights w{tse_test::random_mat(rng, 1, L, 3.0)};
    const Mat got = weighted_layer_sum(s, w);
    const Mat want = tse_test::oracle::weighted_layer_sum(s, w.logits);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("softmax is positive and normalised") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Vec p = softmax(Vec::NullaryExpr(1 + rng.below(30), [&] { return 10.0 * rng.normal(); }));
    CHECK(p.minCoeff() > 0.0);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-9);
  }
}

TEST_CASE("weighted layer sum is linear in the stack") {
  Rng rng(8);
  const FeatureStack a = tse_test::random_stack(rng, 4, 6, 5), b = tse_test::random_stack(rng, 4, 6, 5);
  FeatureStack c = a;
  for (int l = 0; l < 4; ++l) c.layers[l] = 2.0 * a.layers[l] - 0.5 * b.layers[l];
  LayerWeights w{tse_test::random_mat(rng, 1, 4)};
  const Mat lhs = weighted_layer_sum(c, w);
  const Mat rhs = 2.0 * weighted_layer_sum(a, w) - 0.5 * weighted_layer_sum(b, w);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("weighted layer sum logit gradient") {
  Rng rng(9);
  const FeatureStack s = tse_test::random_stack(rng, 5, 6, 4);
  LayerWeights w{tse_test::random_mat(rng, 1, 5)};
  const Mat g = tse_test::random_mat(rng, 6, 4);
  Mat grad = Mat::Zero(1, 5);
  weighted_layer_sum_backward(s, w, g, grad);
  auto loss = [&] { return weighted_layer_sum(s, w).cwiseProduct(g).sum(); };
  const auto r = tse_test::check_gradients(loss, {{"logits", &w.logits}}, {{"logits", &grad}}, 1e-6, 0, rng);
  INFO(r.worst);
  CHECK(r.max_rel_error < 1e-6);
}

TEST_CASE("file feature provider reads dumps named after the audio stem") {
  TempDir dir("prov");
  Rng rng(10);
  const AudioSignal x(tse_test::random_signal(rng, 4000));
  write_wav(x, dir / "utt.wav");
  const ToyFeatureProvider toy({7, 2, 8});
  FeatureStack s = toy.features(dir / "utt.wav", x);
  fs::create_directories(dir / "feats");
  store_features(FileFeatureProvider::feature_path(dir / "feats", dir / "utt.wav"), s);
  const FileFeatureProvider files(dir / "feats");
  CHECK(files.num_layers() == 3);
  CHECK(files.dim() == 8);
  const FeatureStack t = files.features(dir / "utt.wav", x);
  for (int l = 0; l < 3; ++l) CHECK((t.layers[l] - s.layers[l]).cwiseAbs().maxCoeff() < 1e-6);
  CHECK_THROWS_AS(files.features(dir / "other.wav", x), ValidationError);
  CHECK_THROWS_AS(FileFeatureProvider(dir / "nothing"), ConfigError);
}
