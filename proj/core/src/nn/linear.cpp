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

#include "tse/nn/linear.hpp"

#include <cmath>

#include "tse/common/error.hpp"

namespace tse {

LinearParams LinearParams::init(int in, int out, Rng& rng, bool with_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  LinearParams p;
  p.weight.resize(in, out);
  for (Eigen::Index i = 0; i < p.weight.size(); ++i) p.weight.data()[i] = rng.uniform(-bound, bound);
  if (with_bias) {
    p.bias.resize(1, out);
    for (Eigen::Index i = 0; i < p.bias.size(); ++i) p.bias.data()[i] = rng.uniform(-bound, bound);
  }
  return p;
}

Mat LinearParams::forward(const Mat& x) const {
  if (x.cols() != weight.rows())
    throw ShapeError("linear layer expects width " + std::to_string(weight.rows()) + ", got " + std::to_string(x.cols()));
  Mat y = x * weight;
  if (has_bias()) y.rowwise() += bias.row(0);
  return y;
}

Mat LinearParams::backward(const Mat& x, const Mat& grad_out, LinearParams& grads) const {
  grads.weight.noalias() += x.transpose() * grad_out;
  if (has_bias()) grads.bias += grad_out.colwise().sum();
  return grad_out * weight.transpose();
}

}  // namespace tse
