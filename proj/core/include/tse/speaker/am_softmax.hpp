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

#include "tse/nn/tensor.hpp"

namespace tse {

inline constexpr double kAmSoftmaxScale = 30.0;
inline constexpr double kAmSoftmaxMargin = 0.4;

// Additive-margin softmax cross-entropy. Both the embedding (1 x E) and the
// rows of class_weights (C x E) are length-normalised; the logits are
// s (cos_y - m) for the true class and s cos_j otherwise. Optional outputs
// receive dL/d embedding and dL/d class_weights (overwritten, not
// accumulated).
double am_softmax_loss(const Mat& embedding, const Mat& class_weights, int label, double scale = kAmSoftmaxScale,
                       double margin = kAmSoftmaxMargin, Mat* grad_embedding = nullptr,
                       Mat* grad_class_weights = nullptr);

// Cosine similarity of two embeddings.
double cosine_similarity(const Mat& a, const Mat& b);

}  // namespace tse
