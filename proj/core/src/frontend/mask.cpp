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

#include "tse/frontend/mask.hpp"

#include <string>

#include "tse/common/error.hpp"

namespace tse {

std::string_view to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::kMagnitude: return "magnitude";
    case MaskKind::kComplex: return "complex";
    case MaskKind::kEncoder: return "encoder";
  }
  return "?";
}

MaskKind mask_kind_from_string(std::string_view name) {
  if (name == "magnitude") return MaskKind::kMagnitude;
  if (name == "complex") return MaskKind::kComplex;
  if (name == "encoder") return MaskKind::kEncoder;
  throw ConfigError("unknown mask kind \"" + std::string(name) + "\"");
}

MaskTensor MaskTensor::ones(MaskKind kind, Eigen::Index frames, Eigen::Index width) {
  MaskTensor m;
  m.kind = kind;
  m.real = Mat::Ones(frames, width);
  if (kind == MaskKind::kComplex) m.imag = Mat::Zero(frames, width);
  return m;
}

Spectrogram apply_mask(const Spectrogram& z, const MaskTensor& m) {
  if (m.kind == MaskKind::kEncoder) throw ShapeError("encoder-domain mask cannot be applied to a spectrogram");
  if (m.real.rows() != z.frames.rows() || m.real.cols() != z.frames.cols())
    throw ShapeError("mask shape does not match spectrogram shape");
  Spectrogram out;
  out.original_length = z.original_length;
  out.hop = z.hop;
  if (m.kind == MaskKind::kMagnitude) {
    // M |Z| e^{i angle Z} == M Z, which also keeps zero bins at zero.
    out.frames = z.frames.array() * m.real.array().cast<std::complex<double>>();
  } else {
    if (m.imag.rows() != m.real.rows() || m.imag.cols() != m.real.cols())
      throw ShapeError("complex mask needs matching real and imaginary channels");
    out.frames.resize(z.frames.rows(), z.frames.cols());
    for (Eigen::Index i = 0; i < z.frames.size(); ++i)
      out.frames.data()[i] = z.frames.data()[i] * std::complex<double>(m.real.data()[i], m.imag.data()[i]);
  }
  return out;
}

EncodedFeatures apply_mask(const EncodedFeatures& z, const MaskTensor& m) {
  if (m.kind != MaskKind::kEncoder) throw ShapeError("encoder features need an encoder-domain mask");
  if (m.real.rows() != z.frames.rows() || m.real.cols() != z.frames.cols())
    throw ShapeError("mask shape does not match encoder feature shape");
  EncodedFeatures out = z;
  out.frames = z.frames.cwiseProduct(m.real);
  return out;
}

}  // namespace tse
