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

#include "tse/metrics/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tse/common/error.hpp"

namespace tse {

double failure_rate(const std::vector<double>& si_sdri, double threshold_db) {
  if (si_sdri.empty()) throw DegenerateInputError("failure rate of an empty result list");
  const auto failures = std::count_if(si_sdri.begin(), si_sdri.end(), [&](double v) { return v < threshold_db; });
  return 100.0 * static_cast<double>(failures) / static_cast<double>(si_sdri.size());
}

double equal_error_rate(const std::vector<double>& target_scores, const std::vector<double>& nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    throw DegenerateInputError("EER needs at least one target and one nontarget trial");
  std::vector<double> tgt = target_scores, non = nontarget_scores;
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());
  std::vector<double> all = tgt;
  all.insert(all.end(), non.begin(), non.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::vector<double> thresholds{-std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < all.size(); ++i) thresholds.push_back(0.5 * (all[i] + all[i + 1]));
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const auto frr = [&](double t) {
    return static_cast<double>(std::lower_bound(tgt.begin(), tgt.end(), t) - tgt.begin()) / tgt.size();
  };
  const auto far = [&](double t) {
    return static_cast<double>(non.end() - std::lower_bound(non.begin(), non.end(), t)) / non.size();
  };
  // FRR rises and FAR falls with t; find the first threshold where FRR >= FAR.
  double prev_frr = frr(thresholds[0]), prev_far = far(thresholds[0]);
  if (prev_frr >= prev_far) return 100.0 * 0.5 * (prev_frr + prev_far);
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    const double r = frr(thresholds[i]), a = far(thresholds[i]);
    if (r >= a) {
      const double d0 = prev_far - prev_frr;  // > 0
      const double d1 = r - a;                // >= 0
      const double lambda = d0 / (d0 + d1);
      return 100.0 * (prev_frr + lambda * (r - prev_frr));
    }
    prev_frr = r;
    prev_far = a;
  }
  return 100.0 * 0.5 * (prev_frr + prev_far);
}

namespace {
double mean_of(const std::vector<SampleMetrics>& v, double SampleMetrics::*field) {
  if (v.empty()) throw EmptyInputError("no evaluated samples");
  double s = 0.0;
  for (const auto& m : v) s += m.*field;
  return s / static_cast<double>(v.size());
}
}  // namespace

double MetricReport::mean_si_sdri() const { return mean_of(per_sample, &SampleMetrics::si_sdri); }
double MetricReport::mean_stoi() const { return mean_of(per_sample, &SampleMetrics::stoi); }
double MetricReport::failure_rate_pct() const {
  std::vector<double> v;
  for (const auto& m : per_sample) v.push_back(m.si_sdri);
  return failure_rate(v);
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : per_sample)
    rows.push_back({{"id", m.id}, {"si_sdr_mix", m.si_sdr_mix}, {"si_sdr_est", m.si_sdr_est}, {"si_sdri", m.si_sdri}, {"stoi", m.stoi}});
  return {{"per_sample", rows},
          {"aggregates", {{"mean_si_sdri", mean_si_sdri()}, {"mean_stoi", mean_stoi()}, {"failure_rate_pct", failure_rate_pct()}}}};
}

MetricReport MetricReport::from_json(const nlohmann::json& j) {
  MetricReport r;
  for (const auto& row : j.at("per_sample"))
    r.per_sample.push_back({row.at("id").get<std::string>(), row.at("si_sdr_mix").get<double>(), row.at("si_sdr_est").get<double>(),
                            row.at("si_sdri").get<double>(), row.at("stoi").get<double>()});
  return r;
}

}  // namespace tse
