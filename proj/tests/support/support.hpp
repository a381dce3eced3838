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

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tse/common/rng.hpp"
#include "tse/nn/tensor.hpp"
#include "tse/upstream/feature_stack.hpp"

namespace tse_test {

// 50 significant decimal digits; the oracles below evaluate every formula
// from scratch in this type.
using HP = boost::multiprecision::cpp_bin_float_50;

std::vector<double> random_signal(tse::Rng& rng, std::size_t n, double amplitude = 0.5);
tse::Mat random_mat(tse::Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0);
tse::FeatureStack random_stack(tse::Rng& rng, int layers, Eigen::Index frames, Eigen::Index dim);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

// |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric, double floor = 1e-8);

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // "<tensor>[i]: analytic vs numeric"
};

// Central differences of `loss` with respect to entries of `params`,
// compared with `grads` (same order and shapes). Up to `per_tensor` entries
// per tensor are probed (all when 0), chosen by `rng`.
GradCheck check_gradients(const std::function<double()>& loss,
                          const std::vector<std::pair<std::string, tse::Mat*>>& params,
                          const std::vector<std::pair<std::string, tse::Mat*>>& grads, double step,
                          std::size_t per_tensor, tse::Rng& rng, double floor = 1e-8);

// Independent high-precision evaluations of the metric and model formulas.
namespace oracle {

double si_sdr(const std::vector<double>& est, const std::vector<double>& ref);
double spectral_mse(const tse::Mat& a, const tse::Mat& b);
double am_softmax(const tse::Mat& e, const tse::Mat& w, int label, double s, double m);
tse::Mat weighted_layer_sum(const tse::FeatureStack& stack, const tse::Mat& logits);
// Step-by-step MHFA in high precision, from raw parameter matrices.
struct MhfaRaw {
  tse::Mat att_logits, feat_logits;
  tse::Mat kw, kb, vw, vb, head, ow, ob;
};
tse::Mat mhfa(const tse::FeatureStack& stack, const MhfaRaw& p);
// EER by exhaustive sweep over every candidate threshold, taking the
// operating point closest to FAR == FRR and averaging the two rates there.
double eer_bruteforce(const std::vector<double>& tgt, const std::vector<double>& non);

}  // namespace oracle
}  // namespace tse_test
