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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tse/nn/tensor.hpp"

namespace tse {

// Layer-wise frozen upstream outputs h: (L+1) matrices of T' x D. Layer 0 is
// the pre-transformer (CNN) output.
struct FeatureStack {
  std::vector<Mat> layers;
  int frame_hop = 320;
  std::size_t source_length = 0;

  int num_layers() const noexcept { return static_cast<int>(layers.size()); }
  Eigen::Index frames() const noexcept { return layers.empty() ? 0 : layers.front().rows(); }
  Eigen::Index dim() const noexcept { return layers.empty() ? 0 : layers.front().cols(); }

  // Checks L >= 1, equal layer shapes and finite values.
  void validate() const;

  // Frames [begin, begin + count) of every layer.
  FeatureStack slice_frames(Eigen::Index begin, Eigen::Index count) const;
};

// Learnable logits over the L+1 layers; the effective weights are
// softmax(logits).
struct LayerWeights {
  Mat logits;  // 1 x (L+1)

  static LayerWeights zeros(int num_layers) { return {Mat::Zero(1, num_layers)}; }
  int size() const noexcept { return static_cast<int>(logits.cols()); }
  Vec normalized() const;

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(param_name(prefix, "logits"), logits);
  }
};

Vec softmax(const Vec& logits);

// sum_l softmax(logits)_l * layers[l]
Mat weighted_layer_sum(const FeatureStack& stack, const LayerWeights& weights);

// Accumulates dL/d logits given dL/d output.
void weighted_layer_sum_backward(const FeatureStack& stack, const LayerWeights& weights, const Mat& grad_output,
                                 Mat& grad_logits);

}  // namespace tse
