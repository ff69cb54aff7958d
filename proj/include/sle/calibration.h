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

#ifndef SLE_CALIBRATION_H_
#define SLE_CALIBRATION_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sle/metrics.h"
#include "sle/shapes.h"

namespace sle {

// GEMM size bands keyed by max(M, K, N):
//   Small  [32, 128]   (anything below 32 also lands here)
//   Medium (128, 1024]
//   Large  (1024, 4096] (anything above 4096 also lands here)
enum class Regime { kSmall, kMedium, kLarge };

inline constexpr int64_t kRegimeFloor = 32;
inline constexpr int64_t kSmallUpper = 128;
inline constexpr int64_t kMediumUpper = 1024;
inline constexpr int64_t kRegimeCeiling = 4096;

std::string_view RegimeName(Regime regime);  // small | medium | large
std::optional<Regime> RegimeFromName(std::string_view name);
Regime RegimeFor(int64_t max_dim);
inline Regime RegimeFor(const GemmShape& shape) {
  return RegimeFor(shape.max_dim());
}
// True when max_dim lies outside [32, 4096]: the regime line is extrapolated.
bool OutsideRegimeBounds(int64_t max_dim);

struct MeasurementRecord {
  GemmShape gemm;
  int64_t cycles = 0;
  double latency_s = 0.0;
};

// t = alpha * cycles + beta.
struct LinearFit {
  double alpha_s_per_cycle = 0.0;
  double beta_s = 0.0;
  RegressionMetrics metrics;  // rmse/mae in seconds
  int n_samples = 0;
};

struct CalibrationModel {
  std::string target_label = "tpu-v4";
  std::map<Regime, LinearFit> regimes;
  // Single line over all records; when set it serves every regime.
  std::optional<LinearFit> pooled;
  // Regimes that had fewer than two records at fit time.
  std::vector<Regime> unfitted;
};

struct FitOptions {
  bool pooled = false;
  std::string target_label = "tpu-v4";
};

// Ordinary least squares per regime: alpha = cov(x, y) / var(x),
// beta = mean(y) - alpha * mean(x). Stored metrics are those of Predict on
// the training records. Throws DegenerateFitError when a regime's cycles are
// all equal or the fitted slope is not positive.
CalibrationModel Fit(const std::vector<MeasurementRecord>& records,
                     const FitOptions& options = {});

struct LatencyEstimate {
  double seconds = 0.0;
  Regime regime = Regime::kSmall;
  bool extrapolated = false;
  bool clamped = false;  // the line went negative and was clamped to 0
};

// Throws MissingRegimeError when the shape's regime was not fitted.
LatencyEstimate Predict(const CalibrationModel& model, const GemmShape& shape,
                        int64_t cycles);

struct CalibrationEvaluation {
  std::map<Regime, RegressionMetrics> per_regime;
  RegressionMetrics pooled;
};

CalibrationEvaluation Evaluate(const CalibrationModel& model,
                               const std::vector<MeasurementRecord>& holdout);

// Measurement CSV: header "M,K,N,cycles,latency_us".
std::vector<MeasurementRecord> ReadMeasurements(std::istream& in);
void WriteMeasurements(std::ostream& out,
                       const std::vector<MeasurementRecord>& records);

// Calibration JSON:
// {target_label, regimes: {small|medium|large|pooled: {alpha_ns_per_cycle,
//  beta_us, r2, rmse_us, mae_us, mape_pct, n_samples}}}
std::string CalibrationToJson(const CalibrationModel& model);
// Throws FormatError on malformed input.
CalibrationModel CalibrationFromJson(std::string_view text);

}  // namespace sle

#endif  // SLE_CALIBRATION_H_
