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

#include "tse/nn/params.hpp"

#include <cmath>
#include <map>

#include "tse/common/error.hpp"

namespace tse {

double global_norm(const std::vector<NamedTensor>& tensors) {
  double s = 0.0;
  for (const auto& [name, m] : tensors) s += m->squaredNorm();
  return std::sqrt(s);
}

double clip_global_norm(const std::vector<NamedTensor>& tensors, double max_norm) {
  const double norm = global_norm(tensors);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& [name, m] : tensors) *m *= scale;
  }
  return norm;
}

void round_to_float(Mat& m) {
  m = m.unaryExpr([](double v) { return static_cast<double>(static_cast<float>(v)); });
}

Adam::Adam(std::vector<NamedTensor> params, AdamOptions options) : params_(std::move(params)), options_(options) {
  for (const auto& [name, p] : params_) {
    m_.push_back(Mat::Zero(p->rows(), p->cols()));
    v_.push_back(Mat::Zero(p->rows(), p->cols()));
  }
}

void Adam::step(const std::vector<NamedTensor>& grads) {
  if (grads.size() != params_.size()) throw ShapeError("gradient list does not match parameter list");
  ++steps_;
  const double bc1 = 1.0 - std::pow(options_.beta1, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(options_.beta2, static_cast<double>(steps_));
  const double step_size = options_.lr / bc1;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const Mat& g = *grads[k].second;
    m_[k] = options_.beta1 * m_[k] + (1.0 - options_.beta1) * g;
    v_[k] = options_.beta2 * v_[k] + (1.0 - options_.beta2) * g.cwiseAbs2();
    params_[k].second->array() -=
        step_size * m_[k].array() / ((v_[k].array() / bc2).sqrt() + options_.eps);
    if (options_.float32_state) {
      round_to_float(m_[k]);
      round_to_float(v_[k]);
      round_to_float(*params_[k].second);
    }
  }
}

std::vector<std::pair<std::string, Mat>> Adam::state() const {
  std::vector<std::pair<std::string, Mat>> out;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    out.emplace_back("m." + params_[k].first, m_[k]);
    out.emplace_back("v." + params_[k].first, v_[k]);
  }
  return out;
}

void Adam::restore(const std::vector<std::pair<std::string, Mat>>& state, long steps) {
  std::map<std::string, const Mat*> by_name;
  for (const auto& [name, m] : state) by_name[name] = &m;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    for (auto [prefix, dst] : {std::pair{"m.", &m_[k]}, std::pair{"v.", &v_[k]}}) {
      auto it = by_name.find(prefix + params_[k].first);
      if (it == by_name.end()) throw CorruptFileError(std::string("optimizer state lacks ") + prefix + params_[k].first);
      if (it->second->rows() != dst->rows() || it->second->cols() != dst->cols())
        throw CorruptFileError("optimizer state shape mismatch for " + params_[k].first);
      *dst = *it->second;
    }
  }
  steps_ = steps;
}

}  // namespace tse
