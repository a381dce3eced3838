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

#include "tse/frontend/fft.hpp"

#include <cstring>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace tse {
namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

RealFft::RealFft(int size) : size_(size), plans_(std::make_unique<Plans>()) {
  std::vector<double> real(size);
  std::vector<fftw_complex> cplx(size / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_1d(size, real.data(), cplx.data(), flags);
  plans_->c2r = fftw_plan_dft_c2r_1d(size, cplx.data(), real.data(), flags | FFTW_DESTROY_INPUT);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
}

void RealFft::forward(const double* in, std::complex<double>* out) const {
  std::vector<double> buf(in, in + size_);
  fftw_execute_dft_r2c(plans_->r2c, buf.data(), reinterpret_cast<fftw_complex*>(out));
}

void RealFft::inverse(const std::complex<double>* in, double* out) const {
  std::vector<std::complex<double>> buf(in, in + bins());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(buf.data()), out);
}

const RealFft& RealFft::get(int size) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[size];
  if (!slot) slot = std::make_unique<RealFft>(size);
  return *slot;
}

}  // namespace tse
