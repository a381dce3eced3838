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
#include <utility>
#include <vector>

#include "tse/nn/tensor.hpp"

namespace tse {

using NamedTensor = std::pair<std::string, Mat*>;

// Flat, ordered view of every parameter tensor of a model exposing
// visit(prefix, f).
template <class Model>
std::vector<NamedTensor> named_parameters(Model& model) {
  std::vector<NamedTensor> out;
  model.visit("", [&out](const std::string& name, Mat& m) { out.emplace_back(name, &m); });
  return out;
}

// Same structure as `model` with every tensor zeroed; used as a gradient
// buffer.
template <class Model>
Model zeros_like(const Model& model) {
  Model z = model;
  z.visit("", [](const std::string&, Mat& m) { m.setZero(); });
  return z;
}

template <class Model>
void set_zero(Model& model) {
  model.visit("", [](const std::string&, Mat& m) { m.setZero(); });
}

template <class Model>
std::size_t parameter_count(Model& model) {
  std::size_t n = 0;
  model.visit("", [&n](const std::string&, Mat& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

double global_norm(const std::vector<NamedTensor>& tensors);

// Rescales all tensors so their joint L2 norm is at most max_norm. Returns
// the norm before clipping.
double clip_global_norm(const std::vector<NamedTensor>& tensors, double max_norm);

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Rounds parameters and moments to float32 after every step so that a
  // float32 checkpoint restores the exact training state.
  bool float32_state = false;
};

// Rounds every entry to the nearest float32 value.
void round_to_float(Mat& m);

class Adam {
 public:
  Adam(std::vector<NamedTensor> params, AdamOptions options);

  // grads must be ordered as the params passed to the constructor.
  void step(const std::vector<NamedTensor>& grads);

  long steps() const noexcept { return steps_; }
  // Optimiser state as named tensors ("m.<name>", "v.<name>") for
  // checkpointing; restore() expects the same names and shapes.
  std::vector<std::pair<std::string, Mat>> state() const;
  void restore(const std::vector<std::pair<std::string, Mat>>& state, long steps);

 private:
  std::vector<NamedTensor> params_;
  std::vector<Mat> m_, v_;
  AdamOptions options_;
  long steps_ = 0;
};

}  // namespace tse
