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

#include <span>
#include <vector>

#include "tse/audio/signal.hpp"
#include "tse/nn/tensor.hpp"

namespace tse {

inline constexpr double kSiSdrCapDb = 100.0;
inline constexpr double kSiSdrRelativeFloor = 1e-12;
// Keeps the ratio finite for an all-zero estimate; far below the energy of
// any 16-bit signal.
inline constexpr double kSiSdrAbsoluteFloor = 1e-20;

// Scale-invariant SDR in dB. Both signals are mean-subtracted; with
// alpha = <s_hat, s> / <s, s>,
//   10 log10( (|alpha s|^2 + a) / (|alpha s - s_hat|^2 + r |alpha s|^2 + a) )
// with r = kSiSdrRelativeFloor, a = kSiSdrAbsoluteFloor, capped at +100 dB.
// Requires equal lengths and a non-silent reference.
double si_sdr(std::span<const double> estimate, std::span<const double> reference);
inline double si_sdr(const AudioSignal& estimate, const AudioSignal& reference) {
  return si_sdr(estimate.view(), reference.view());
}

// -si_sdr. When `grad` is given it receives dLoss/d estimate (zero once the
// cap is active).
double si_sdr_loss(std::span<const double> estimate, std::span<const double> reference,
                   std::vector<double>* grad = nullptr);

// si_sdr(estimate, reference) - si_sdr(mixture, reference), after trimming
// all three to the shortest length.
double si_sdri(std::span<const double> estimate, std::span<const double> reference, std::span<const double> mixture);

// Mean over all entries of (est - ref)^2. When `grad` is given it receives
// dLoss/d est.
double spectral_mse(const Mat& est_mag, const Mat& ref_mag, Mat* grad = nullptr);

}  // namespace tse
