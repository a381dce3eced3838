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

#include "tse/upstream/feature_stack.hpp"

#include <cmath>

#include "tse/common/error.hpp"

namespace tse {

void FeatureStack::validate() const {
  if (layers.size() < 2) throw ShapeError("feature stack needs at least 2 layers (L >= 1)");
  for (const Mat& l : layers) {
    if (l.rows() != frames() || l.cols() != dim()) throw ShapeError("feature stack layers differ in shape");
    if (!l.allFinite()) throw RangeError("feature stack contains non-finite values");
  }
}

FeatureStack FeatureStack::slice_frames(Eigen::Index begin, Eigen::Index count) const {
  if (begin < 0 || count < 0 || begin + count > frames()) throw ShapeError("frame slice out of range");
  FeatureStack out;
  out.frame_hop = frame_hop;
  out.source_length = static_cast<std::size_t>(count) * frame_hop;
  out.layers.reserve(layers.size());
  for (const Mat& l : layers) out.layers.emplace_back(l.middleRows(begin, count));
  return out;
}

Vec softmax(const Vec& logits) {
  const double mx = logits.maxCoeff();
  Vec e = (logits.array() - mx).exp().matrix();
  return e / e.sum();
}

Vec LayerWeights::normalized() const { return softmax(logits.row(0).transpose()); }

Mat weighted_layer_sum(const FeatureStack& stack, const LayerWeights& weights) {
  if (weights.size() != stack.num_layers())
    throw ShapeError("layer weights have " + std::to_string(weights.size()) + " entries for " +
                     std::to_string(stack.num_layers()) + " layers");
  const Vec w = weights.normalized();
  Mat out = Mat::Zero(stack.frames(), stack.dim());
  for (int l = 0; l < stack.num_layers(); ++l) out.noalias() += w[l] * stack.layers[l];
  return out;
}

void weighted_layer_sum_backward(const FeatureStack& stack, const LayerWeights& weights, const Mat& grad_output,
                                 Mat& grad_logits) {
  const Vec w = weights.normalized();
  Vec gw(w.size());
  for (int l = 0; l < stack.num_layers(); ++l) gw[l] = stack.layers[l].cwiseProduct(grad_output).sum();
  const double dot = w.dot(gw);
  for (int l = 0; l < stack.num_layers(); ++l) grad_logits(0, l) += w[l] * (gw[l] - dot);
}

}  // namespace tse
