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

#include "tse/speaker/stft_spkenc.hpp"

#include "tse/common/error.hpp"

namespace tse {

StftSpkEncParams StftSpkEncParams::init(int bins, int hidden, int layers, int embed, Rng& rng) {
  StftSpkEncParams p;
  p.blstm = BlstmStack::init(bins, hidden, layers, rng);
  p.proj = LinearParams::init(2 * hidden, embed, rng);
  return p;
}

SpeakerEmbedding stft_spkenc_embed(const Mat& features, const StftSpkEncParams& p, StftSpkEncCache* cache) {
  if (features.rows() < 1) throw EmptyInputError("speaker encoder input has no frames");
  if (p.blstm.layers.empty() || features.cols() != p.blstm.layers.front().fwd.in())
    throw ShapeError("speaker encoder expects " + std::to_string(p.blstm.layers.front().fwd.in()) + " bins, got " +
                     std::to_string(features.cols()));
  StftSpkEncCache local;
  StftSpkEncCache& c = cache ? *cache : local;
  const Mat h = blstm_stack_forward(p.blstm, features, c.blstm);
  c.pooled = h.colwise().mean();
  return p.proj.forward(c.pooled);
}

Mat stft_spkenc_backward(const StftSpkEncParams& p, const StftSpkEncCache& c, const Mat& grad_e,
                         StftSpkEncParams& g) {
  const Mat gpooled = p.proj.backward(c.pooled, grad_e, g.proj);
  const Eigen::Index T = c.blstm.inputs.front().rows();
  const Mat gh = gpooled.replicate(T, 1) / static_cast<double>(T);
  return blstm_stack_backward(p.blstm, c.blstm, gh, g.blstm);
}

}  // namespace tse
