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

#include "tse/frontend/stft.hpp"

#include <cmath>
#include <numbers>

#include "tse/common/error.hpp"
#include "tse/frontend/fft.hpp"

namespace tse {
namespace {

constexpr int kPad = kFftSize / 2;

// Window-square sum over the padded timeline, shared by decode and its adjoint.
std::vector<double> window_square_sum(Eigen::Index frames) {
  const auto& w = hann_window();
  std::vector<double> wss(static_cast<std::size_t>((frames - 1) * kHop + kFftSize), 0.0);
  for (Eigen::Index t = 0; t < frames; ++t)
    for (int k = 0; k < kFftSize; ++k) wss[t * kHop + k] += w[k] * w[k];
  return wss;
}

constexpr double kWssFloor = 1e-11;

}  // namespace

const std::vector<double>& hann_window() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kFftSize);
    for (int n = 0; n < kFftSize; ++n) v[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kFftSize);
    return v;
  }();
  return w;
}

std::size_t stft_frame_count(std::size_t length) { return (length + kHop - 1) / kHop; }

Spectrogram stft_encode(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < static_cast<std::size_t>(kFftSize))
    throw LengthError("STFT input has " + std::to_string(n) + " samples, need at least 1024");
  std::vector<double> padded(n + 2 * kPad);
  for (std::size_t i = 0; i < n; ++i) padded[i + kPad] = x[i];
  for (int k = 1; k <= kPad; ++k) {
    padded[kPad - k] = x[k];
    padded[kPad + n - 1 + k] = x[n - 1 - k];
  }

  const auto T = static_cast<Eigen::Index>(stft_frame_count(n));
  Spectrogram spec;
  spec.original_length = n;
  spec.frames.resize(T, kNumBins);
  const auto& w = hann_window();
  const RealFft& fft = RealFft::get(kFftSize);
  std::vector<double> frame(kFftSize);
  for (Eigen::Index t = 0; t < T; ++t) {
    const double* src = padded.data() + t * kHop;
    for (int k = 0; k < kFftSize; ++k) frame[k] = src[k] * w[k];
    fft.forward(frame.data(), spec.frames.row(t).data());
  }
  return spec;
}

AudioSignal istft_decode(const Spectrogram& spec, std::size_t length) {
  const Eigen::Index T = spec.frames.rows();
  if (spec.frames.cols() != kNumBins) throw ShapeError("spectrogram must have 513 bins");
  if (T < 1) throw ShapeError("spectrogram has no frames");
  if (length > static_cast<std::size_t>(T * kHop + kFftSize))
    throw LengthError("requested length " + std::to_string(length) + " exceeds what " + std::to_string(T) +
                      " frames can cover");
  const auto& w = hann_window();
  const RealFft& fft = RealFft::get(kFftSize);
  std::vector<double> acc(static_cast<std::size_t>((T - 1) * kHop + kFftSize), 0.0);
  std::vector<double> frame(kFftSize);
  for (Eigen::Index t = 0; t < T; ++t) {
    fft.inverse(spec.frames.row(t).data(), frame.data());
    for (int k = 0; k < kFftSize; ++k) acc[t * kHop + k] += w[k] * frame[k] / kFftSize;
  }
  const std::vector<double> wss = window_square_sum(T);
  AudioSignal out;
  out.samples.assign(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t p = i + kPad;
    if (p < acc.size() && wss[p] > kWssFloor) out.samples[i] = acc[p] / wss[p];
  }
  return out;
}

CMat istft_backward(std::span<const double> grad_output, Eigen::Index T) {
  const auto& w = hann_window();
  const RealFft& fft = RealFft::get(kFftSize);
  const std::vector<double> wss = window_square_sum(T);
  std::vector<double> gacc(wss.size(), 0.0);
  for (std::size_t i = 0; i < grad_output.size(); ++i) {
    const std::size_t p = i + kPad;
    if (p < gacc.size() && wss[p] > kWssFloor) gacc[p] = grad_output[i] / wss[p];
  }
  CMat grad(T, kNumBins);
  std::vector<double> frame(kFftSize);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int k = 0; k < kFftSize; ++k) frame[k] = w[k] * gacc[t * kHop + k] / kFftSize;
    fft.forward(frame.data(), grad.row(t).data());
    // Bins 1 .. N/2-1 appear twice in the Hermitian-completed inverse.
    grad.row(t).segment(1, kNumBins - 2) *= 2.0;
    grad(t, 0).imag(0.0);
    grad(t, kNumBins - 1).imag(0.0);
  }
  return grad;
}

Mat magnitude(const Spectrogram& spec) { return spec.frames.cwiseAbs(); }

Mat log_magnitude(const Spectrogram& spec) {
  return spec.frames.cwiseAbs().array().log1p().matrix();
}

}  // namespace tse
