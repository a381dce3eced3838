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

#include "tse/metrics/stoi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "tse/common/error.hpp"
#include "tse/frontend/fft.hpp"

namespace tse {
namespace {

constexpr int kStoiRate = 10000;
constexpr int kFrame = 256;
constexpr int kStoiFft = 512;
constexpr int kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr int kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

std::vector<double> resample_filter(int up, int down) {
  const double rejection_db = 60.0;
  const double cutoff = 1.0 / (2.0 * std::max(up, down));
  const double roll_off = cutoff / 10.0;
  const int half = static_cast<int>(std::ceil((rejection_db - 8.0) / (28.714 * roll_off)));
  const double beta = 0.1102 * (rejection_db - 8.7);
  const int len = 2 * half + 1;
  std::vector<double> h(len);
  const double i0b = std::cyl_bessel_i(0.0, beta);
  for (int n = 0; n < len; ++n) {
    const double t = n - half;
    const double r = 2.0 * n / (len - 1) - 1.0;
    const double kaiser = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    h[n] = kaiser * 2.0 * up * cutoff * sinc(2.0 * cutoff * t);
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v = v / sum * up;
  return h;
}

// Hann window without the zero end points (length n).
std::vector<double> inner_hann(int n) {
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (k + 1) / (n + 1));
  return w;
}

// Drops frames of x (and the matching frames of y) whose energy is more than
// kDynRange below the loudest frame of x, then overlap-adds the survivors.
void remove_silent_frames(std::vector<double>& x, std::vector<double>& y) {
  const int hop = kFrame / 2;
  const auto w = inner_hann(kFrame);
  std::vector<int> starts;
  for (int i = 0; i + kFrame < static_cast<int>(x.size()); i += hop) starts.push_back(i);
  std::vector<double> energy_db(starts.size());
  for (std::size_t f = 0; f < starts.size(); ++f) {
    double e = 0.0;
    for (int k = 0; k < kFrame; ++k) {
      const double v = w[k] * x[starts[f] + k];
      e += v * v;
    }
    energy_db[f] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double max_db = starts.empty() ? 0.0 : *std::max_element(energy_db.begin(), energy_db.end());
  std::vector<int> keep;
  for (std::size_t f = 0; f < starts.size(); ++f)
    if (max_db - kDynRange - energy_db[f] < 0.0) keep.push_back(starts[f]);

  const std::size_t out_len = keep.empty() ? 0 : (keep.size() - 1) * hop + kFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t f = 0; f < keep.size(); ++f)
    for (int k = 0; k < kFrame; ++k) {
      xs[f * hop + k] += w[k] * x[keep[f] + k];
      ys[f * hop + k] += w[k] * y[keep[f] + k];
    }
  x = std::move(xs);
  y = std::move(ys);
}

// One-third-octave band envelopes, kBands x frames.
std::vector<std::vector<double>> band_envelopes(const std::vector<double>& x, const std::vector<std::pair<int, int>>& bands) {
  const int hop = kFrame / 2;
  const auto w = inner_hann(kFrame);
  const RealFft& fft = RealFft::get(kStoiFft);
  std::vector<double> buf(kStoiFft);
  std::vector<std::complex<double>> spec(kStoiFft / 2 + 1);
  std::vector<std::vector<double>> env(kBands);
  for (int i = 0; i + kFrame < static_cast<int>(x.size()); i += hop) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int k = 0; k < kFrame; ++k) buf[k] = w[k] * x[i + k];
    fft.forward(buf.data(), spec.data());
    for (int b = 0; b < kBands; ++b) {
      double e = 0.0;
      for (int k = bands[b].first; k < bands[b].second; ++k) e += std::norm(spec[k]);
      env[b].push_back(std::sqrt(e));
    }
  }
  return env;
}

std::vector<std::pair<int, int>> third_octave_bands() {
  const int bins = kStoiFft / 2 + 1;
  std::vector<double> f(bins);
  for (int k = 0; k < bins; ++k) f[k] = static_cast<double>(k) * kStoiRate / kStoiFft;
  const auto nearest = [&](double target) {
    int best = 0;
    for (int k = 1; k < bins; ++k)
      if ((f[k] - target) * (f[k] - target) < (f[best] - target) * (f[best] - target)) best = k;
    return best;
  };
  std::vector<std::pair<int, int>> bands;
  for (int b = 0; b < kBands; ++b) {
    const double lo = kMinFreq * std::pow(2.0, (2.0 * b - 1.0) / 6.0);
    const double hi = kMinFreq * std::pow(2.0, (2.0 * b + 1.0) / 6.0);
    bands.emplace_back(nearest(lo), nearest(hi));
  }
  return bands;
}

}  // namespace

std::vector<double> resample_poly(std::span<const double> x, int up, int down) {
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return {x.begin(), x.end()};
  const std::vector<double> h = resample_filter(up, down);
  const long half = (static_cast<long>(h.size()) - 1) / 2;
  const long n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(n_out, 0.0);
  for (long m = 0; m < n_out; ++m) {
    // y[m] = sum_n x[n] h[m*down + half - n*up]
    const long c = m * down + half;
    long n_lo = std::max(0L, (c - static_cast<long>(h.size()) + 1 + up - 1) / up);
    const long n_hi = std::min(n_in - 1, c / up);
    double acc = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) acc += x[n] * h[c - n * up];
    y[m] = acc;
  }
  return y;
}

double stoi(std::span<const double> estimate, std::span<const double> reference, int sample_rate) {
  if (estimate.size() != reference.size()) throw ShapeError("STOI inputs differ in length");
  if (reference.size() < static_cast<std::size_t>(sample_rate / 2)) throw LengthError("STOI needs at least 0.5 s of audio");
  std::vector<double> x = resample_poly(reference, kStoiRate, sample_rate);
  std::vector<double> y = resample_poly(estimate, kStoiRate, sample_rate);
  remove_silent_frames(x, y);

  const auto bands = third_octave_bands();
  const auto xe = band_envelopes(x, bands);
  const auto ye = band_envelopes(y, bands);
  const int frames = static_cast<int>(xe[0].size());
  if (frames < kSegment)
    throw LengthError("STOI needs at least 30 active frames, got " + std::to_string(frames));

  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  int count = 0;
  std::vector<double> xs(kSegment), ys(kSegment);
  for (int m = kSegment; m <= frames; ++m) {
    for (int b = 0; b < kBands; ++b) {
      double nx = 0.0, ny = 0.0;
      for (int k = 0; k < kSegment; ++k) {
        xs[k] = xe[b][m - kSegment + k];
        ys[k] = ye[b][m - kSegment + k];
        nx += xs[k] * xs[k];
        ny += ys[k] * ys[k];
      }
      const double norm_const = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0.0, my = 0.0;
      for (int k = 0; k < kSegment; ++k) {
        ys[k] = std::min(ys[k] * norm_const, xs[k] * (1.0 + clip));
        mx += xs[k];
        my += ys[k];
      }
      mx /= kSegment;
      my /= kSegment;
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int k = 0; k < kSegment; ++k) {
        const double a = xs[k] - mx, c = ys[k] - my;
        sxx += a * a;
        syy += c * c;
        sxy += a * c;
      }
      total += sxy / ((std::sqrt(sxx) + kEps) * (std::sqrt(syy) + kEps));
      ++count;
    }
  }
  return total / count;
}

}  // namespace tse
