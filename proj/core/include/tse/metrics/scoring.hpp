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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tse {

// Percentage of samples whose SI-SDR improvement is strictly below the
// threshold. Empty input is an error.
double failure_rate(const std::vector<double>& si_sdri, double threshold_db = 1.0);

// Equal error rate in percent. The threshold sweeps every midpoint between
// distinct scores; FRR(t) counts target scores below t, FAR(t) nontarget
// scores at or above t, and the crossing is interpolated linearly.
double equal_error_rate(const std::vector<double>& target_scores, const std::vector<double>& nontarget_scores);

struct SampleMetrics {
  std::string id;
  double si_sdr_mix = 0.0;
  double si_sdr_est = 0.0;
  double si_sdri = 0.0;
  double stoi = 0.0;
};

struct MetricReport {
  std::vector<SampleMetrics> per_sample;

  double mean_si_sdri() const;
  double mean_stoi() const;
  double failure_rate_pct() const;
  nlohmann::json to_json() const;
  static MetricReport from_json(const nlohmann::json& j);
};

}  // namespace tse
