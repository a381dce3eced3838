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

#include "tse/speaker/am_softmax.hpp"

#include <cmath>

#include "tse/common/error.hpp"

namespace tse {

double am_softmax_loss(const Mat& e, const Mat& w, int label, double s, double m, Mat* grad_e, Mat* grad_w) {
  if (e.rows() != 1 || e.cols() != w.cols()) throw ShapeError("embedding and class weights differ in width");
  const Eigen::Index C = w.rows();
  if (label < 0 || label >= C) throw ShapeError("label out of range");
  const double en = e.norm();
  if (!(en > 0.0)) throw NormalizationError("zero-norm embedding");
  const Eigen::VectorXd wn = w.rowwise().norm();
  if (!(wn.minCoeff() > 0.0)) throw NormalizationError("zero-norm class weight row");

  const Eigen::RowVectorXd ehat = e.row(0) / en;
  const Mat what = wn.cwiseInverse().asDiagonal() * w;
  const Eigen::VectorXd cos = what * ehat.transpose();
  Eigen::VectorXd z = s * cos;
  z[label] -= s * m;
  const double mx = z.maxCoeff();
  const double lse = mx + std::log((z.array() - mx).exp().sum());
  const double loss = lse - z[label];

  if (grad_e || grad_w) {
    Eigen::VectorXd dz = (z.array() - lse).exp().matrix();
    dz[label] -= 1.0;
    const Eigen::VectorXd dcos = s * dz;
    if (grad_e) {
      const Eigen::RowVectorXd along = dcos.transpose() * what;
      *grad_e = (along - dcos.dot(cos) * ehat) / en;
    }
    if (grad_w) {
      grad_w->resize(C, w.cols());
      for (Eigen::Index j = 0; j < C; ++j) grad_w->row(j) = dcos[j] * (ehat - cos[j] * what.row(j)) / wn[j];
    }
  }
  return loss;
}

double cosine_similarity(const Mat& a, const Mat& b) {
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw NormalizationError("zero-norm embedding");
  return a.cwiseProduct(b).sum() / (na * nb);
}

}  // namespace tse
