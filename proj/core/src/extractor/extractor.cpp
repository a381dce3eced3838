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

#include "tse/extractor/extractor.hpp"

#include "tse/common/error.hpp"

namespace tse {

ExtractorParams ExtractorParams::init(const ExtractorConfig& c, Rng& rng) {
  ExtractorParams p;
  p.mask_kind = c.mask;
  p.mixnet = BlstmStack::init(c.input_dim, c.hidden, 1, rng);
  p.fusion = FusionParams::init(c.fusion, c.embed, 2 * c.hidden, rng);
  p.masknet = BlstmStack::init(2 * c.hidden, c.hidden, 2, rng);
  const int out = c.mask == MaskKind::kComplex ? 2 * c.mask_width : c.mask_width;
  p.head = LinearParams::init(2 * c.hidden, out, rng);
  // Start near the identity mask (real part 1, imaginary part 0).
  p.head.bias.leftCols(c.mask_width).setOnes();
  if (c.mask == MaskKind::kComplex) p.head.bias.rightCols(c.mask_width).setZero();
  return p;
}

MaskTensor estimate_mask(const Mat& features, const SpeakerEmbedding& e, const ExtractorParams& p,
                         ExtractorCache* cache) {
  if (features.rows() == 0) throw EmptyInputError("extractor input has no frames");
  ExtractorCache local;
  ExtractorCache& c = cache ? *cache : local;
  c.z_mix = blstm_stack_forward(p.mixnet, features, c.mixnet);
  const Mat fused = fuse(c.z_mix, e, p.fusion, &c.fusion);
  c.head_in = blstm_stack_forward(p.masknet, fused, c.masknet);
  c.head_out = p.head.forward(c.head_in);

  MaskTensor m;
  m.kind = p.mask_kind;
  if (p.mask_kind == MaskKind::kComplex) {
    const int w = p.mask_width();
    m.real = c.head_out.leftCols(w);
    m.imag = c.head_out.rightCols(w);
  } else {
    m.real = c.head_out.cwiseMax(0.0);
  }
  return m;
}

void estimate_mask_backward(const SpeakerEmbedding& e, const ExtractorParams& p, const ExtractorCache& c,
                            const MaskTensor& gm, ExtractorParams& g, Mat& grad_features, Mat& grad_e) {
  Mat ghead(c.head_out.rows(), c.head_out.cols());
  if (p.mask_kind == MaskKind::kComplex) {
    ghead.leftCols(p.mask_width()) = gm.real;
    ghead.rightCols(p.mask_width()) = gm.imag;
  } else {
    ghead = (c.head_out.array() > 0.0).select(gm.real, 0.0);
  }
  const Mat gmask_in = p.head.backward(c.head_in, ghead, g.head);
  const Mat gfused = blstm_stack_backward(p.masknet, c.masknet, gmask_in, g.masknet);
  Mat gz;
  fuse_backward(c.z_mix, e, p.fusion, c.fusion, gfused, g.fusion, gz, grad_e);
  grad_features = blstm_stack_backward(p.mixnet, c.mixnet, gz, g.mixnet);
}

}  // namespace tse
