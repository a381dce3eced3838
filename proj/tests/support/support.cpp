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

#include "support/support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace tse_test {

std::vector<double> random_signal(tse::Rng& rng, std::size_t n, double amplitude) {
  std::vector<double> x(n);
  for (double& v : x) v = amplitude * rng.uniform(-1.0, 1.0);
  return x;
}

tse::Mat random_mat(tse::Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  tse::Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

tse::FeatureStack random_stack(tse::Rng& rng, int layers, Eigen::Index frames, Eigen::Index dim) {
  tse::FeatureStack s;
  for (int l = 0; l < layers; ++l) s.layers.push_back(random_mat(rng, frames, dim));
  s.source_length = static_cast<std::size_t>(frames) * 320;
  return s;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("tse_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradCheck check_gradients(const std::function<double()>& loss,
                          const std::vector<std::pair<std::string, tse::Mat*>>& params,
                          const std::vector<std::pair<std::string, tse::Mat*>>& grads, double step,
                          std::size_t per_tensor, tse::Rng& rng, double floor) {
  GradCheck out;
  for (std::size_t k = 0; k < params.size(); ++k) {
    tse::Mat& p = *params[k].second;
    const tse::Mat& g = *grads[k].second;
    const auto n = static_cast<std::size_t>(p.size());
    std::vector<std::size_t> idx;
    if (per_tensor == 0 || per_tensor >= n) {
      for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    } else {
      std::set<std::size_t> pick;
      while (pick.size() < per_tensor) pick.insert(rng.below(n));
      idx.assign(pick.begin(), pick.end());
    }
    for (std::size_t i : idx) {
      const double saved = p.data()[i];
      p.data()[i] = saved + step;
      const double up = loss();
      p.data()[i] = saved - step;
      const double down = loss();
      p.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = g.data()[i];
      const double err = relative_error(analytic, numeric, floor);
      ++out.checked;
      if (err > out.max_rel_error || out.worst.empty()) {
        if (err >= out.max_rel_error) {
          std::ostringstream s;
          s.precision(10);
          s << params[k].first << "[" << i << "]: " << analytic << " vs " << numeric;
          out.worst = s.str();
        }
        out.max_rel_error = std::max(out.max_rel_error, err);
      }
    }
  }
  return out;
}

namespace oracle {
namespace {

HP hp_log10(const HP& x) { return boost::multiprecision::log10(x); }

std::vector<HP> softmax(const tse::Mat& logits) {
  std::vector<HP> e(static_cast<std::size_t>(logits.size()));
  HP sum = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = boost::multiprecision::exp(HP(logits.data()[i]));
    sum += e[i];
  }
  for (HP& v : e) v /= sum;
  return e;
}

using HMat = std::vector<std::vector<HP>>;

HMat to_hp(const tse::Mat& m) {
  HMat out(static_cast<std::size_t>(m.rows()), std::vector<HP>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

HMat matmul(const HMat& a, const HMat& b) {
  HMat out(a.size(), std::vector<HP>(b.front().size(), HP(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[k].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

void add_row(HMat& a, const tse::Mat& bias) {
  for (auto& row : a)
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += HP(bias(0, static_cast<Eigen::Index>(j)));
}

HMat weighted_sum_hp(const tse::FeatureStack& stack, const tse::Mat& logits) {
  const auto w = softmax(logits);
  HMat out(static_cast<std::size_t>(stack.frames()), std::vector<HP>(static_cast<std::size_t>(stack.dim()), HP(0)));
  for (std::size_t l = 0; l < stack.layers.size(); ++l)
    for (Eigen::Index t = 0; t < stack.frames(); ++t)
      for (Eigen::Index d = 0; d < stack.dim(); ++d) out[t][d] += w[l] * HP(stack.layers[l](t, d));
  return out;
}

tse::Mat to_double(const HMat& m) {
  tse::Mat out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.front().size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = static_cast<double>(m[i][j]);
  return out;
}

}  // namespace

double si_sdr(const std::vector<double>& est, const std::vector<double>& ref) {
  const std::size_t n = ref.size();
  HP me = 0, mr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    me += est[i];
    mr += ref[i];
  }
  me /= n;
  mr /= n;
  HP dot = 0, ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += (HP(est[i]) - me) * (HP(ref[i]) - mr);
    ss += (HP(ref[i]) - mr) * (HP(ref[i]) - mr);
  }
  const HP alpha = dot / ss;
  HP sig = 0, err = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const HP s = alpha * (HP(ref[i]) - mr);
    const HP d = s - (HP(est[i]) - me);
    sig += s * s;
    err += d * d;
  }
  const HP value = 10 * hp_log10((sig + HP(1e-20)) / (err + HP(1e-12) * sig + HP(1e-20)));
  return std::min(100.0, static_cast<double>(value));
}

double spectral_mse(const tse::Mat& a, const tse::Mat& b) {
  HP acc = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const HP d = HP(a.data()[i]) - HP(b.data()[i]);
    acc += d * d;
  }
  return static_cast<double>(acc / a.size());
}

double am_softmax(const tse::Mat& e, const tse::Mat& w, int label, double s, double m) {
  HP en = 0;
  for (Eigen::Index j = 0; j < e.cols(); ++j) en += HP(e(0, j)) * HP(e(0, j));
  en = boost::multiprecision::sqrt(en);
  std::vector<HP> logits;
  for (Eigen::Index c = 0; c < w.rows(); ++c) {
    HP wn = 0, dot = 0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      wn += HP(w(c, j)) * HP(w(c, j));
      dot += HP(w(c, j)) * HP(e(0, j));
    }
    HP cos = dot / (boost::multiprecision::sqrt(wn) * en);
    logits.push_back(HP(s) * (c == label ? cos - HP(m) : cos));
  }
  HP denom = 0;
  for (const HP& z : logits) denom += boost::multiprecision::exp(z);
  return static_cast<double>(boost::multiprecision::log(denom) - logits[static_cast<std::size_t>(label)]);
}

tse::Mat weighted_layer_sum(const tse::FeatureStack& stack, const tse::Mat& logits) {
  return to_double(weighted_sum_hp(stack, logits));
}

tse::Mat mhfa(const tse::FeatureStack& stack, const MhfaRaw& p) {
  HMat k = matmul(weighted_sum_hp(stack, p.att_logits), to_hp(p.kw));
  add_row(k, p.kb);
  HMat v = matmul(weighted_sum_hp(stack, p.feat_logits), to_hp(p.vw));
  add_row(v, p.vb);
  const HMat scores = matmul(k, to_hp(p.head));
  const std::size_t T = scores.size(), H = scores.front().size(), dc = v.front().size();
  std::vector<HP> pooled(H * dc, HP(0));
  for (std::size_t h = 0; h < H; ++h) {
    HP z = 0;
    std::vector<HP> a(T);
    for (std::size_t t = 0; t < T; ++t) z += a[t] = boost::multiprecision::exp(scores[t][h]);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t c = 0; c < dc; ++c) pooled[h * dc + c] += a[t] / z * v[t][c];
  }
  HMat row{pooled};
  HMat e = matmul(row, to_hp(p.ow));
  add_row(e, p.ob);
  return to_double(e);
}

double eer_bruteforce(const std::vector<double>& tgt, const std::vector<double>& non) {
  std::vector<double> cand{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::vector<double> all(tgt);
  all.insert(all.end(), non.begin(), non.end());
  for (double a : all)
    for (double b : all) cand.push_back(0.5 * (a + b));
  double best_gap = 2.0, best = 0.0;
  for (double t : cand) {
    double frr = 0, far = 0;
    for (double s : tgt) frr += s < t;
    for (double s : non) far += s >= t;
    frr /= tgt.size();
    far /= non.size();
    if (std::abs(frr - far) < best_gap) {
      best_gap = std::abs(frr - far);
      best = 50.0 * (frr + far);
    }
  }
  return best;
}

}  // namespace oracle
}  // namespace tse_test
