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

#include "tse/frontend/conv_frontend.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "tse/common/error.hpp"

namespace tse {

ConvFrontendParams ConvFrontendParams::init(int filters, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(kConvKernel));
  ConvFrontendParams p;
  p.encoder.resize(kConvKernel, filters);
  p.decoder.resize(filters, kConvKernel);
  for (Eigen::Index i = 0; i < p.encoder.size(); ++i) p.encoder.data()[i] = rng.uniform(-bound, bound);
  for (Eigen::Index i = 0; i < p.decoder.size(); ++i) p.decoder.data()[i] = rng.uniform(-bound, bound);
  return p;
}

const std::vector<double>& synthesis_window() {
  static const std::vector<double> w = [] {
    std::vector<double> hann(kConvKernel), out(kConvKernel);
    for (int n = 0; n < kConvKernel; ++n) hann[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 0.5) / kConvKernel);
    for (int n = 0; n < kConvKernel; ++n) {
      double sum = 0.0;
      for (int m = n % kConvStride; m < kConvKernel; m += kConvStride) sum += hann[m];
      out[n] = hann[n] / sum;
    }
    return out;
  }();
  return w;
}

void ConvFrontendParams::fit_decoder(std::span<const AudioSignal> calibration, double ridge) {
  const Eigen::Index F = encoder.cols();
  Mat gram = Mat::Zero(F, F);
  Mat cross = Mat::Zero(F, kConvKernel);
  const auto& w = synthesis_window();
  for (const AudioSignal& s : calibration) {
    const Mat frames = frame_signal(s.view());
    const Mat feats = (frames * encoder).cwiseMax(0.0);
    Mat target = frames;
    for (Eigen::Index t = 0; t < target.rows(); ++t)
      for (int k = 0; k < kConvKernel; ++k) target(t, k) *= w[k];
    gram.noalias() += feats.transpose() * feats;
    cross.noalias() += feats.transpose() * target;
  }
  const double scale = gram.trace() / static_cast<double>(F);
  if (!(scale > 0.0)) throw DegenerateInputError("calibration audio produced no encoder activity");
  gram.diagonal().array() += ridge * scale;
  decoder = gram.ldlt().solve(cross);
}

std::size_t conv_frame_count(std::size_t length) {
  if (length < static_cast<std::size_t>(kConvKernel)) return 0;
  return (length - kConvKernel) / kConvStride + 1;
}

Mat frame_signal(std::span<const double> x) {
  const auto T = static_cast<Eigen::Index>(conv_frame_count(x.size()));
  if (T == 0) throw LengthError("conv encoder input has " + std::to_string(x.size()) + " samples, need at least 1024");
  Mat frames(T, kConvKernel);
  for (Eigen::Index t = 0; t < T; ++t)
    for (int k = 0; k < kConvKernel; ++k) frames(t, k) = x[t * kConvStride + k];
  return frames;
}

EncodedFeatures conv_encode(std::span<const double> x, const Mat& encoder) {
  if (encoder.rows() != kConvKernel) throw ShapeError("encoder filters must have 1024 taps");
  EncodedFeatures out;
  out.original_length = x.size();
  out.frames = (frame_signal(x) * encoder).cwiseMax(0.0);
  return out;
}

void conv_encode_backward(const Mat& frames, const Mat& features, const Mat& grad_features, Mat& grad_encoder) {
  const Mat gated = (features.array() > 0.0).select(grad_features, 0.0);
  grad_encoder.noalias() += frames.transpose() * gated;
}

AudioSignal deconv_decode(const Mat& features, const Mat& decoder, std::size_t length) {
  if (decoder.rows() != features.cols() || decoder.cols() != kConvKernel)
    throw ShapeError("decoder is " + std::to_string(decoder.rows()) + "x" + std::to_string(decoder.cols()) +
                     " but features have " + std::to_string(features.cols()) + " channels");
  const Mat frames = features * decoder;
  AudioSignal out;
  out.samples.assign(length, 0.0);
  for (Eigen::Index t = 0; t < frames.rows(); ++t)
    for (int k = 0; k < kConvKernel; ++k) {
      const std::size_t p = t * kConvStride + k;
      if (p < length) out.samples[p] += frames(t, k);
    }
  return out;
}

Mat deconv_decode_backward(const Mat& features, const Mat& decoder, std::span<const double> grad_output,
                           Mat& grad_decoder) {
  Mat gframes(features.rows(), kConvKernel);
  for (Eigen::Index t = 0; t < gframes.rows(); ++t)
    for (int k = 0; k < kConvKernel; ++k) {
      const std::size_t p = t * kConvStride + k;
      gframes(t, k) = p < grad_output.size() ? grad_output[p] : 0.0;
    }
  grad_decoder.noalias() += features.transpose() * gframes;
  return gframes * decoder.transpose();
}

}  // namespace tse
