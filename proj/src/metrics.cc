// Copyright 2026 The SLE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sle/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sle {

RegressionMetrics ComputeRegressionMetrics(std::span<const double> actual,
                                           std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("metric inputs differ in length");
  }
  RegressionMetrics m;
  m.n = static_cast<int>(actual.size());
  if (actual.empty()) return m;

  double mean = 0.0;
  for (double y : actual) mean += y;
  mean /= static_cast<double>(actual.size());

  double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0, pct_sum = 0.0;
  for (size_t i = 0; i < actual.size(); ++i) {
    const double residual = actual[i] - predicted[i];
    ss_res += residual * residual;
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
    abs_sum += std::abs(residual);
    pct_sum += std::abs(residual) / std::abs(actual[i]);
  }
  const double n = static_cast<double>(actual.size());
  if (ss_tot > 0.0) {
    m.r2 = 1.0 - ss_res / ss_tot;
  } else {
    m.r2 = ss_res == 0.0 ? 1.0 : 0.0;
  }
  m.rmse = std::sqrt(ss_res / n);
  m.mae = abs_sum / n;
  m.mape = pct_sum / n * 100.0;
  return m;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace sle
