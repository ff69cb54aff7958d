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

#ifndef SLE_ESTIMATOR_H_
#define SLE_ESTIMATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sle/calibration.h"
#include "sle/shapes.h"

namespace sle {

// Seconds to integer nanoseconds, rounding half to even. All report
// latencies are held in nanoseconds so totals are exact integer sums.
int64_t SecondsToNs(double seconds);

struct OpReport {
  int source_line = 0;
  std::string op_kind;
  std::string op_class;  // gemm | conv | elementwise | unsupported
  std::optional<int64_t> cycles;  // one GEMM instance, systolic ops only
  int64_t batch_count = 1;
  int64_t latency_ns = 0;  // 0 for unsupported ops
  std::optional<std::string> regime;
  std::string model_used;  // calibration:<regime|pooled>, gbdt:<tag>, none
  // Any of: extrapolated, batched, clamped, rank_folded, dtype_mismatch,
  // unsupported.
  std::vector<std::string> flags;
  std::string reason;  // why the op is unsupported; empty otherwise

  bool operator==(const OpReport&) const = default;
};

struct ReportTotals {
  int64_t systolic_ns = 0;
  int64_t elementwise_ns = 0;
  int64_t total_ns = 0;
  int op_count = 0;
  int unsupported_count = 0;
  // supported / op_count; 1 for a module without ops.
  double coverage_fraction = 1.0;

  bool operator==(const ReportTotals&) const = default;
};

struct ReportMetadata {
  std::string array = "128x128";
  std::string dataflow = "os";
  std::string calibration_target;
  // Op latencies are summed with no overlap between ops.
  std::string composition = "sequential_sum";
  // Systolic cycles cover compute, fill and drain only; no memory stalls.
  std::string cycle_model = "compute_only";

  bool operator==(const ReportMetadata&) const = default;
};

struct LatencyReport {
  ReportMetadata metadata;
  std::vector<OpReport> per_op;
  ReportTotals totals;

  bool operator==(const LatencyReport&) const = default;
};

// Reads a calibration file. Throws MissingCalibrationError when the file
// cannot be opened and FormatError when it is malformed.
CalibrationModel LoadCalibration(const std::string& path);

// Parses, classifies and costs every op of `mlir_text` in source order.
// Elementwise models are read from `<models_dir>/<tag>.json`; a missing or
// unreadable model turns the affected ops into unsupported rows. An empty
// `models_dir` means no elementwise models. Throws SyntaxError from the
// parser and MissingCalibrationError when `models_dir` is set but is not a
// directory.
LatencyReport EstimateModule(std::string_view mlir_text,
                             const CalibrationModel& calibration,
                             const std::string& models_dir,
                             const ArrayConfig& array);

enum class ReportFormat { kJson, kCsv, kHuman };

ReportFormat ParseReportFormat(std::string_view name);  // throws Error

// Latencies appear in microseconds with three decimals (exact, since they
// are whole nanoseconds). JSON additionally carries latency_ns.
std::string EmitReport(const LatencyReport& report, ReportFormat format);

// Inverse of the JSON form of EmitReport. Throws FormatError.
LatencyReport ReportFromJson(std::string_view text);

}  // namespace sle

#endif  // SLE_ESTIMATOR_H_
