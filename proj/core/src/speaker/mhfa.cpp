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

#include "tse/speaker/mhfa.hpp"

#include "tse/common/error.hpp"

namespace tse {

MhfaParams MhfaParams::init(const MhfaConfig& c, Rng& rng) {
  MhfaParams p;
  p.att_logits = LayerWeights::zeros(c.num_layers);
  p.feat_logits = LayerWeights::zeros(c.num_layers);
  p.key_compress = LinearParams::init(c.dim, c.compress, rng);
  p.value_compress = LinearParams::init(c.dim, c.compress, rng);
  p.head_map = LinearParams::init(c.compress, c.heads, rng, /*with_bias=*/false);
  p.out_proj = LinearParams::init(c.heads * c.compress, c.embed, rng);
  return p;
}

std::size_t MhfaParams::expected_parameter_count(const MhfaConfig& c) {
  const std::size_t L1 = c.num_layers, D = c.dim, dc = c.compress, H = c.heads, E = c.embed;
  return 2 * L1 + 2 * (D * dc + dc) + dc * H + H * dc * E + E;
}

SpeakerEmbedding mhfa_embed(const FeatureStack& stack, const MhfaParams& p, MhfaCache* cache) {
  if (stack.frames() == 0) throw EmptyInputError("MHFA input has no frames");
  if (stack.dim() != p.key_compress.in())
    throw ShapeError("MHFA expects feature dimension " + std::to_string(p.key_compress.in()) + ", got " +
                     std::to_string(stack.dim()));
  MhfaCache local;
  MhfaCache& c = cache ? *cache : local;
  c.keys = weighted_layer_sum(stack, p.att_logits);
  c.values = weighted_layer_sum(stack, p.feat_logits);
  c.keys_c = p.key_compress.forward(c.keys);
  c.values_c = p.value_compress.forward(c.values);
  const Mat scores = p.head_map.forward(c.keys_c);
  const Eigen::Index T = scores.rows();
  const int H = p.heads(), dc = p.compress();
  c.attention.resize(T, H);
  for (int h = 0; h < H; ++h) {
    const double mx = scores.col(h).maxCoeff();
    c.attention.col(h) = (scores.col(h).array() - mx).exp().matrix();
    c.attention.col(h) /= c.attention.col(h).sum();
  }
  const Mat pooled = c.attention.transpose() * c.values_c;  // H x d_c
  c.pooled = Eigen::Map<const Mat>(pooled.data(), 1, H * dc);
  return p.out_proj.forward(c.pooled);
}

void mhfa_backward(const FeatureStack& stack, const MhfaParams& p, const MhfaCache& c, const Mat& grad_e,
                   MhfaParams& g) {
  const int H = p.heads(), dc = p.compress();
  const Mat gz = p.out_proj.backward(c.pooled, grad_e, g.out_proj);
  const Mat gpooled = Eigen::Map<const Mat>(gz.data(), H, dc);
  const Mat gatt = c.values_c * gpooled.transpose();  // T x H
  const Mat gvalues_c = c.attention * gpooled;        // T x d_c
  Mat gscores(gatt.rows(), H);
  for (int h = 0; h < H; ++h) {
    const double dot = c.attention.col(h).dot(gatt.col(h));
    gscores.col(h) = c.attention.col(h).cwiseProduct((gatt.col(h).array() - dot).matrix());
  }
  const Mat gkeys_c = p.head_map.backward(c.keys_c, gscores, g.head_map);
  const Mat gkeys = p.key_compress.backward(c.keys, gkeys_c, g.key_compress);
  const Mat gvalues = p.value_compress.backward(c.values, gvalues_c, g.value_compress);
  weighted_layer_sum_backward(stack, p.att_logits, gkeys, g.att_logits.logits);
  weighted_layer_sum_backward(stack, p.feat_logits, gvalues, g.feat_logits.logits);
}

}  // namespace tse
