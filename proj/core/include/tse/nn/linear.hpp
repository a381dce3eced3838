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

#include <string>

#include "tse/common/rng.hpp"
#include "tse/nn/tensor.hpp"

namespace tse {

// y = x W + b over rows of x. weight is in x out, bias 1 x out (empty when
// the layer has no bias).
struct LinearParams {
  Mat weight;
  Mat bias;

  // PyTorch-style uniform init in +-1/sqrt(in).
  static LinearParams init(int in, int out, Rng& rng, bool with_bias = true);

  int in() const noexcept { return static_cast<int>(weight.rows()); }
  int out() const noexcept { return static_cast<int>(weight.cols()); }
  bool has_bias() const noexcept { return bias.size() > 0; }

  Mat forward(const Mat& x) const;
  // Accumulates into grads and returns dL/dx.
  Mat backward(const Mat& x, const Mat& grad_out, LinearParams& grads) const;

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(param_name(prefix, "weight"), weight);
    if (has_bias()) f(param_name(prefix, "bias"), bias);
  }
};

}  // namespace tse
