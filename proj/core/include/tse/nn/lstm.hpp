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
#include <vector>

#include "tse/common/rng.hpp"
#include "tse/nn/tensor.hpp"

namespace tse {

// Single-direction LSTM with gate order (input, forget, cell, output).
struct LstmParams {
  Mat wx;    // in x 4H
  Mat wh;    // H x 4H
  Mat bias;  // 1 x 4H

  // Uniform in +-1/sqrt(H); forget-gate bias starts at 1.
  static LstmParams init(int in, int hidden, Rng& rng);
  int hidden() const noexcept { return static_cast<int>(wh.rows()); }
  int in() const noexcept { return static_cast<int>(wx.rows()); }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(param_name(prefix, "wx"), wx);
    f(param_name(prefix, "wh"), wh);
    f(param_name(prefix, "bias"), bias);
  }
};

struct LstmCache {
  Mat gates;      // T x 4H, post-activation
  Mat cell;       // T x H
  Mat cell_tanh;  // T x H
  Mat hidden;     // T x H
};

// Runs over the rows of x, right to left when `reverse` is set. Returns T x H.
Mat lstm_forward(const LstmParams& p, const Mat& x, bool reverse, LstmCache& cache);
// Backpropagation through time; accumulates into grads and returns dL/dx.
Mat lstm_backward(const LstmParams& p, const Mat& x, bool reverse, const LstmCache& cache, const Mat& grad_hidden,
                  LstmParams& grads);

struct BlstmParams {
  LstmParams fwd;
  LstmParams bwd;

  static BlstmParams init(int in, int hidden, Rng& rng);
  int hidden() const noexcept { return fwd.hidden(); }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    fwd.visit(param_name(prefix, "fwd"), f);
    bwd.visit(param_name(prefix, "bwd"), f);
  }
};

struct BlstmCache {
  LstmCache fwd, bwd;
};

// Output is [forward hidden, backward hidden], T x 2H.
Mat blstm_forward(const BlstmParams& p, const Mat& x, BlstmCache& cache);
Mat blstm_backward(const BlstmParams& p, const Mat& x, const BlstmCache& cache, const Mat& grad_out,
                   BlstmParams& grads);

// A stack of BLSTM layers; layer k > 0 consumes the 2H output of layer k-1.
struct BlstmStack {
  std::vector<BlstmParams> layers;

  static BlstmStack init(int in, int hidden, int num_layers, Rng& rng);
  int out_dim() const noexcept { return layers.empty() ? 0 : 2 * layers.back().hidden(); }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    for (std::size_t k = 0; k < layers.size(); ++k)
      layers[k].visit(param_name(prefix, ("layer" + std::to_string(k)).c_str()), f);
  }
};

struct BlstmStackCache {
  std::vector<Mat> inputs;  // input to each layer
  std::vector<BlstmCache> layers;
};

Mat blstm_stack_forward(const BlstmStack& p, const Mat& x, BlstmStackCache& cache);
Mat blstm_stack_backward(const BlstmStack& p, const BlstmStackCache& cache, const Mat& grad_out, BlstmStack& grads);

}  // namespace tse
