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

#include "tse/extractor/fusion.hpp"

#include "tse/common/error.hpp"

namespace tse {

std::string_view to_string(FusionKind kind) {
  switch (kind) {
    case FusionKind::kAddition: return "addition";
    case FusionKind::kMultiplication: return "multiplication";
    case FusionKind::kConcatenation: return "concatenation";
    case FusionKind::kFilm: return "film";
  }
  return "?";
}

FusionKind fusion_kind_from_string(std::string_view name) {
  if (name == "addition") return FusionKind::kAddition;
  if (name == "multiplication") return FusionKind::kMultiplication;
  if (name == "concatenation") return FusionKind::kConcatenation;
  if (name == "film") return FusionKind::kFilm;
  throw ConfigError("unknown fusion kind \"" + std::string(name) + "\"");
}

FusionParams FusionParams::init(FusionKind kind, int embed, int width, Rng& rng) {
  FusionParams p;
  p.kind = kind;
  switch (kind) {
    case FusionKind::kAddition:
    case FusionKind::kMultiplication:
      p.embed_proj = LinearParams::init(embed, width, rng);
      break;
    case FusionKind::kConcatenation:
      p.embed_proj = LinearParams::init(embed, width, rng);
      p.concat_reduce = LinearParams::init(2 * width, width, rng);
      break;
    case FusionKind::kFilm:
      p.film_proj1 = LinearParams::init(embed, width, rng);
      p.film_proj2 = LinearParams::init(embed, width, rng);
      break;
  }
  return p;
}

Mat fuse(const Mat& z, const SpeakerEmbedding& e, const FusionParams& p, FusionCache* cache) {
  FusionCache local;
  FusionCache& c = cache ? *cache : local;
  const Eigen::Index T = z.rows();
  switch (p.kind) {
    case FusionKind::kAddition: {
      c.proj1 = p.embed_proj.forward(e);
      if (c.proj1.cols() != z.cols()) throw ShapeError("fusion width mismatch");
      Mat out = z;
      out.rowwise() += c.proj1.row(0);
      return out;
    }
    case FusionKind::kMultiplication: {
      c.proj1 = p.embed_proj.forward(e);
      if (c.proj1.cols() != z.cols()) throw ShapeError("fusion width mismatch");
      return z.array().rowwise() * c.proj1.row(0).array();
    }
    case FusionKind::kConcatenation: {
      c.proj1 = p.embed_proj.forward(e);
      c.concat.resize(T, z.cols() + c.proj1.cols());
      c.concat.leftCols(z.cols()) = z;
      c.concat.rightCols(c.proj1.cols()) = c.proj1.replicate(T, 1);
      return p.concat_reduce.forward(c.concat);
    }
    case FusionKind::kFilm: {
      c.proj1 = p.film_proj1.forward(e);
      c.proj2 = p.film_proj2.forward(e);
      if (c.proj1.cols() != z.cols()) throw ShapeError("fusion width mismatch");
      Mat out = z.array().rowwise() * c.proj1.row(0).array();
      out.rowwise() += c.proj2.row(0);
      return out;
    }
  }
  throw ConfigError("unknown fusion kind");
}

void fuse_backward(const Mat& z, const SpeakerEmbedding& e, const FusionParams& p, const FusionCache& c,
                   const Mat& g, FusionParams& grads, Mat& gz, Mat& ge) {
  switch (p.kind) {
    case FusionKind::kAddition:
      gz = g;
      ge = p.embed_proj.backward(e, g.colwise().sum(), grads.embed_proj);
      return;
    case FusionKind::kMultiplication:
      gz = g.array().rowwise() * c.proj1.row(0).array();
      ge = p.embed_proj.backward(e, g.cwiseProduct(z).colwise().sum(), grads.embed_proj);
      return;
    case FusionKind::kConcatenation: {
      const Mat gcat = p.concat_reduce.backward(c.concat, g, grads.concat_reduce);
      gz = gcat.leftCols(z.cols());
      ge = p.embed_proj.backward(e, gcat.rightCols(c.proj1.cols()).colwise().sum(), grads.embed_proj);
      return;
    }
    case FusionKind::kFilm:
      gz = g.array().rowwise() * c.proj1.row(0).array();
      ge = p.film_proj1.backward(e, g.cwiseProduct(z).colwise().sum(), grads.film_proj1);
      ge += p.film_proj2.backward(e, g.colwise().sum(), grads.film_proj2);
      return;
  }
}

}  // namespace tse
