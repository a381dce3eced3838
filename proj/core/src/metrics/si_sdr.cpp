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

#include "tse/metrics/si_sdr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tse/common/error.hpp"

namespace tse {
namespace {

struct SiSdrParts {
  std::vector<double> s0, e0;
  double alpha = 0.0;
  double num = 0.0;  // |alpha s0|^2
  double den = 0.0;  // |alpha s0 - e0|^2
  double value = 0.0;
  bool capped = false;
};

SiSdrParts compute(std::span<const double> est, std::span<const double> ref) {
  if (est.size() != ref.size())
    throw ShapeError("SI-SDR inputs differ in length (" + std::to_string(est.size()) + " vs " +
                     std::to_string(ref.size()) + ")");
  if (ref.empty()) throw ShapeError("SI-SDR inputs are empty");
  const auto n = static_cast<double>(ref.size());
  SiSdrParts p;
  double ms = 0.0, me = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ms += ref[i];
    me += est[i];
  }
  ms /= n;
  me /= n;
  p.s0.resize(ref.size());
  p.e0.resize(ref.size());
  double ss = 0.0, es = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    p.s0[i] = ref[i] - ms;
    p.e0[i] = est[i] - me;
    ss += p.s0[i] * p.s0[i];
    es += p.e0[i] * p.s0[i];
  }
  if (!(ss > 0.0)) throw DegenerateInputError("SI-SDR reference is silent");
  p.alpha = es / ss;
  p.num = p.alpha * p.alpha * ss;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double r = p.alpha * p.s0[i] - p.e0[i];
    p.den += r * r;
  }
  const double v = 10.0 * std::log10((p.num + kSiSdrAbsoluteFloor) /
                                     (p.den + kSiSdrRelativeFloor * p.num + kSiSdrAbsoluteFloor));
  p.capped = v >= kSiSdrCapDb;
  p.value = std::min(v, kSiSdrCapDb);
  return p;
}

}  // namespace

double si_sdr(std::span<const double> est, std::span<const double> ref) { return compute(est, ref).value; }

double si_sdr_loss(std::span<const double> est, std::span<const double> ref, std::vector<double>* grad) {
  const SiSdrParts p = compute(est, ref);
  if (grad) {
    grad->assign(est.size(), 0.0);
    if (!p.capped) {
      // d num / d e0 = 2 alpha s0; d den / d e0 = -2 r (r = alpha s0 - e0 is
      // orthogonal to s0). Both terms are zero-mean, so the mean-subtraction
      // Jacobian leaves them unchanged.
      const double k = 10.0 / std::numbers::ln10;
      const double a = p.num + kSiSdrAbsoluteFloor;
      const double b = p.den + kSiSdrRelativeFloor * p.num + kSiSdrAbsoluteFloor;
      for (std::size_t i = 0; i < est.size(); ++i) {
        const double r = p.alpha * p.s0[i] - p.e0[i];
        const double dnum = 2.0 * p.alpha * p.s0[i];
        const double dden = -2.0 * r + kSiSdrRelativeFloor * dnum;
        (*grad)[i] = -k * (dnum / a - dden / b);
      }
    }
  }
  return -p.value;
}

double si_sdri(std::span<const double> est, std::span<const double> ref, std::span<const double> mix) {
  const std::size_t n = std::min({est.size(), ref.size(), mix.size()});
  return si_sdr(est.first(n), ref.first(n)) - si_sdr(mix.first(n), ref.first(n));
}

double spectral_mse(const Mat& est, const Mat& ref, Mat* grad) {
  if (est.rows() != ref.rows() || est.cols() != ref.cols()) throw ShapeError("spectral MSE shapes differ");
  if (est.size() == 0) throw ShapeError("spectral MSE inputs are empty");
  const Mat diff = est - ref;
  const auto n = static_cast<double>(diff.size());
  if (grad) *grad = 2.0 * diff / n;
  return diff.squaredNorm() / n;
}

}  // namespace tse
