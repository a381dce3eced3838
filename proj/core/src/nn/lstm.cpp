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

#include "tse/nn/lstm.hpp"

#include <cmath>

#include "tse/common/error.hpp"

namespace tse {
namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

LstmParams LstmParams::init(int in, int hidden, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  LstmParams p;
  p.wx.resize(in, 4 * hidden);
  p.wh.resize(hidden, 4 * hidden);
  p.bias.resize(1, 4 * hidden);
  for (Mat* m : {&p.wx, &p.wh, &p.bias})
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform(-bound, bound);
  p.bias.middleCols(hidden, hidden).array() += 1.0;
  return p;
}

Mat lstm_forward(const LstmParams& p, const Mat& x, bool reverse, LstmCache& cache) {
  if (x.cols() != p.in()) throw ShapeError("LSTM expects width " + std::to_string(p.in()) + ", got " + std::to_string(x.cols()));
  const Eigen::Index T = x.rows();
  const int H = p.hidden();
  Mat pre = x * p.wx;
  pre.rowwise() += p.bias.row(0);
  cache.gates.resize(T, 4 * H);
  cache.cell.resize(T, H);
  cache.cell_tanh.resize(T, H);
  cache.hidden.resize(T, H);

  Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(H);
  Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(H);
  Eigen::RowVectorXd a(4 * H);
  for (Eigen::Index s = 0; s < T; ++s) {
    const Eigen::Index t = reverse ? T - 1 - s : s;
    a.noalias() = pre.row(t) + h * p.wh;
    auto g = cache.gates.row(t);
    for (int j = 0; j < H; ++j) {
      const double ig = sigmoid(a[j]);
      const double fg = sigmoid(a[H + j]);
      const double cg = std::tanh(a[2 * H + j]);
      const double og = sigmoid(a[3 * H + j]);
      g[j] = ig;
      g[H + j] = fg;
      g[2 * H + j] = cg;
      g[3 * H + j] = og;
      c[j] = fg * c[j] + ig * cg;
      const double tc = std::tanh(c[j]);
      cache.cell(t, j) = c[j];
      cache.cell_tanh(t, j) = tc;
      h[j] = og * tc;
    }
    cache.hidden.row(t) = h;
  }
  return cache.hidden;
}

Mat lstm_backward(const LstmParams& p, const Mat& x, bool reverse, const LstmCache& cache, const Mat& grad_hidden,
                  LstmParams& grads) {
  const Eigen::Index T = x.rows();
  const int H = p.hidden();
  Mat dpre(T, 4 * H);
  Mat hprev = Mat::Zero(T, H);
  Eigen::RowVectorXd dh_next = Eigen::RowVectorXd::Zero(H);
  Eigen::RowVectorXd dc_next = Eigen::RowVectorXd::Zero(H);
  for (Eigen::Index s = T - 1; s >= 0; --s) {
    const Eigen::Index t = reverse ? T - 1 - s : s;
    const bool first = s == 0;
    const Eigen::Index tp = reverse ? t + 1 : t - 1;
    const auto g = cache.gates.row(t);
    auto da = dpre.row(t);
    for (int j = 0; j < H; ++j) {
      const double ig = g[j], fg = g[H + j], cg = g[2 * H + j], og = g[3 * H + j];
      const double tc = cache.cell_tanh(t, j);
      const double cprev = first ? 0.0 : cache.cell(tp, j);
      const double dh = grad_hidden(t, j) + dh_next[j];
      const double dc = dh * og * (1.0 - tc * tc) + dc_next[j];
      da[j] = dc * cg * ig * (1.0 - ig);
      da[H + j] = dc * cprev * fg * (1.0 - fg);
      da[2 * H + j] = dc * ig * (1.0 - cg * cg);
      da[3 * H + j] = dh * tc * og * (1.0 - og);
      dc_next[j] = dc * fg;
    }
    dh_next.noalias() = da * p.wh.transpose();
    if (!first) hprev.row(t) = cache.hidden.row(tp);
  }
  grads.wx.noalias() += x.transpose() * dpre;
  grads.wh.noalias() += hprev.transpose() * dpre;
  grads.bias += dpre.colwise().sum();
  return dpre * p.wx.transpose();
}

BlstmParams BlstmParams::init(int in, int hidden, Rng& rng) {
  BlstmParams p;
  p.fwd = LstmParams::init(in, hidden, rng);
  p.bwd = LstmParams::init(in, hidden, rng);
  return p;
}

Mat blstm_forward(const BlstmParams& p, const Mat& x, BlstmCache& cache) {
  const int H = p.hidden();
  Mat out(x.rows(), 2 * H);
  out.leftCols(H) = lstm_forward(p.fwd, x, false, cache.fwd);
  out.rightCols(H) = lstm_forward(p.bwd, x, true, cache.bwd);
  return out;
}

Mat blstm_backward(const BlstmParams& p, const Mat& x, const BlstmCache& cache, const Mat& grad_out,
                   BlstmParams& grads) {
  const int H = p.hidden();
  Mat dx = lstm_backward(p.fwd, x, false, cache.fwd, grad_out.leftCols(H), grads.fwd);
  dx += lstm_backward(p.bwd, x, true, cache.bwd, grad_out.rightCols(H), grads.bwd);
  return dx;
}

BlstmStack BlstmStack::init(int in, int hidden, int num_layers, Rng& rng) {
  BlstmStack s;
  for (int k = 0; k < num_layers; ++k) s.layers.push_back(BlstmParams::init(k == 0 ? in : 2 * hidden, hidden, rng));
  return s;
}

Mat blstm_stack_forward(const BlstmStack& p, const Mat& x, BlstmStackCache& cache) {
  cache.inputs.clear();
  cache.layers.assign(p.layers.size(), {});
  Mat h = x;
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    cache.inputs.push_back(h);
    h = blstm_forward(p.layers[k], cache.inputs.back(), cache.layers[k]);
  }
  return h;
}

Mat blstm_stack_backward(const BlstmStack& p, const BlstmStackCache& cache, const Mat& grad_out, BlstmStack& grads) {
  Mat g = grad_out;
  for (std::size_t k = p.layers.size(); k-- > 0;)
    g = blstm_backward(p.layers[k], cache.inputs[k], cache.layers[k], g, grads.layers[k]);
  return g;
}

}  // namespace tse
