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

#pragma once

#include <complex>
#include <memory>

namespace tse {

// Real-input FFT of a fixed size backed by FFTW. Plans are created once per
// size and shared; execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const noexcept { return size_; }
  int bins() const noexcept { return size_ / 2 + 1; }

  // out[0 .. bins()) = sum_n in[n] exp(-2 pi i k n / N)
  void forward(const double* in, std::complex<double>* out) const;
  // Unnormalised inverse: out = N * irfft(in). Imaginary parts of the DC and
  // Nyquist bins are ignored.
  void inverse(const std::complex<double>* in, double* out) const;

  // Process-wide instance for a given size.
  static const RealFft& get(int size);

 private:
  int size_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace tse
