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

#ifndef SLE_METRICS_H_
#define SLE_METRICS_H_

#include <span>
#include <vector>

namespace sle {

// Goodness of fit of `predicted` against `actual`, in the units of the data
// except mape, which is a percentage.
struct RegressionMetrics {
  double r2 = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double mape = 0.0;
  int n = 0;
};

// r2 = 1 - SS_res / SS_tot. With SS_tot == 0, r2 is 1 for a perfect fit and
// 0 otherwise.
RegressionMetrics ComputeRegressionMetrics(std::span<const double> actual,
                                           std::span<const double> predicted);

// Exact median (mean of the two middle order statistics for even sizes).
double Median(std::vector<double> values);

}  // namespace sle

#endif  // SLE_METRICS_H_
