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

#include "tse/upstream/toy_upstream.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "tse/common/error.hpp"
#include "tse/common/rng.hpp"
#include "tse/frontend/stft.hpp"

namespace tse {
namespace {

constexpr double kLogFloor = 1e-3;

void standardize(Mat& x) {
  const double mean = x.mean();
  x.array() -= mean;
  const double var = x.squaredNorm() / static_cast<double>(x.size());
  x /= std::sqrt(var) + 1e-8;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

ToyUpstream::ToyUpstream(const ToyUpstreamConfig& config) : config_(config) {
  if (config.layers < 1) throw ConfigError("toy upstream needs at least one layer");
  if (config.dim < 1) throw ConfigError("toy upstream dimension must be positive");
  const int D = config.dim;
  Rng rng(Rng::derive(config.seed, 0xf00d));

  const auto& w = hann_window();
  analysis_cos_.resize(kFftSize, D);
  analysis_sin_.resize(kFftSize, D);
  const double lo = std::log(60.0), hi = std::log(7600.0);
  for (int d = 0; d < D; ++d) {
    const double freq = std::exp(rng.uniform(lo, hi));
    const double omega = 2.0 * std::numbers::pi * freq / kSampleRate;
    for (int n = 0; n < kFftSize; ++n) {
      analysis_cos_(n, d) = w[n] * std::cos(omega * n);
      analysis_sin_(n, d) = w[n] * std::sin(omega * n);
    }
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(D));
  for (int l = 0; l < config.layers; ++l) {
    Layer layer{Mat(D, D), Mat(3, D), Mat(1, D)};
    for (Eigen::Index i = 0; i < layer.mix.size(); ++i) layer.mix.data()[i] = scale * rng.normal();
    for (Eigen::Index i = 0; i < layer.temporal.size(); ++i) layer.temporal.data()[i] = 0.5 * rng.normal();
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias.data()[i] = 0.1 * rng.normal();
    layers_.push_back(std::move(layer));
  }
}

FeatureStack ToyUpstream::extract(std::span<const double> x) const {
  const std::size_t n = x.size();
  if (n < static_cast<std::size_t>(kFftSize))
    throw LengthError("upstream input has " + std::to_string(n) + " samples, need at least 1024");
  constexpr int pad = kFftSize / 2;
  std::vector<double> padded(n + 2 * pad);
  for (std::size_t i = 0; i < n; ++i) padded[i + pad] = x[i];
  for (int k = 1; k <= pad; ++k) {
    padded[pad - k] = x[k];
    padded[pad + n - 1 + k] = x[n - 1 - k];
  }
  const auto T = static_cast<Eigen::Index>(stft_frame_count(n));
  Mat frames(T, kFftSize);
  for (Eigen::Index t = 0; t < T; ++t)
    std::memcpy(frames.row(t).data(), padded.data() + t * kHop, sizeof(double) * kFftSize);

  FeatureStack stack;
  stack.frame_hop = kHop;
  stack.source_length = n;
  const Mat c = frames * analysis_cos_;
  const Mat s = frames * analysis_sin_;
  Mat h0 = (c.array().square() + s.array().square()).sqrt().unaryExpr([](double v) { return std::log(kLogFloor + v); });
  standardize(h0);
  stack.layers.push_back(std::move(h0));

  for (const Layer& layer : layers_) {
    const Mat& prev = stack.layers.back();
    Mat pre = prev * layer.mix;
    pre.rowwise() += layer.bias.row(0);
    for (Eigen::Index t = 0; t < T; ++t) {
      pre.row(t) += prev.row(t).cwiseProduct(layer.temporal.row(1));
      if (t > 0) pre.row(t) += prev.row(t - 1).cwiseProduct(layer.temporal.row(0));
      if (t + 1 < T) pre.row(t) += prev.row(t + 1).cwiseProduct(layer.temporal.row(2));
    }
    Mat h = pre.array().tanh().matrix();
    standardize(h);
    stack.layers.push_back(std::move(h));
  }
  return stack;
}

std::uint64_t ToyUpstream::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto add = [&h](const Mat& m) { hash_bytes(h, m.data(), sizeof(double) * static_cast<std::size_t>(m.size())); };
  add(analysis_cos_);
  add(analysis_sin_);
  for (const Layer& l : layers_) {
    add(l.mix);
    add(l.temporal);
    add(l.bias);
  }
  return h;
}

FeatureStack toy_upstream(const AudioSignal& signal, std::uint64_t seed, int layers, int dim) {
  return ToyUpstream({seed, layers, dim}).extract(signal);
}

}  // namespace tse
