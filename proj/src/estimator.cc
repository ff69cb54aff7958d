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

#include "sle/estimator.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <spdlog/spdlog.h>

#include "sle/classify.h"
#include "sle/errors.h"
#include "sle/gbdt.h"
#include "sle/stablehlo_parser.h"
#include "sle/systolic_model.h"

namespace sle {
namespace {

// Loads each op tag's model at most once per module.
class ModelCache {
 public:
  explicit ModelCache(std::string dir) : dir_(std::move(dir)) {}

  // Returns nullptr and sets `reason` when the model is unavailable.
  const GbdtModel* Get(const std::string& tag, std::string* reason) {
    auto it = entries_.find(tag);
    if (it == entries_.end()) it = entries_.emplace(tag, Load(tag)).first;
    *reason = it->second.reason;
    return it->second.model.get();
  }

 private:
  struct Entry {
    std::unique_ptr<GbdtModel> model;
    std::string reason;
  };

  Entry Load(const std::string& tag) const {
    Entry e;
    if (dir_.empty()) {
      e.reason = "no elementwise model directory given";
      return e;
    }
    const std::filesystem::path path =
        std::filesystem::path(dir_) / (tag + ".json");
    if (!std::filesystem::exists(path)) {
      e.reason = "no model for '" + tag + "' (" + path.string() + ")";
      return e;
    }
    try {
      auto model = std::make_unique<GbdtModel>(LoadModel(path.string()));
      if (model->op_tag != tag) {
        e.reason = "model file " + path.string() + " is for '" +
                   model->op_tag + "', not '" + tag + "'";
        return e;
      }
      e.model = std::move(model);
    } catch (const Error& err) {
      e.reason = "unreadable model " + path.string() + ": " + err.what();
    }
    if (!e.reason.empty()) spdlog::warn("{}", e.reason);
    return e;
  }

  std::string dir_;
  std::map<std::string, Entry> entries_;
};

void MarkUnsupported(OpReport& row, std::string reason) {
  row.op_class = "unsupported";
  row.cycles.reset();
  row.regime.reset();
  row.latency_ns = 0;
  row.model_used = "none";
  row.batch_count = 1;
  row.flags = {"unsupported"};
  row.reason = std::move(reason);
}

void CostSystolic(OpReport& row, const CycleEstimate& est,
                  int64_t batch_count, const CalibrationModel& calibration) {
  row.cycles = est.total_cycles;
  row.batch_count = batch_count;
  LatencyEstimate lat;
  try {
    lat = Predict(calibration, est.gemm, est.total_cycles);
  } catch (const MissingRegimeError& e) {
    MarkUnsupported(row, e.what());
    return;
  }
  row.regime = std::string(RegimeName(lat.regime));
  row.model_used = std::string("calibration:") +
                   (calibration.pooled ? "pooled" : *row.regime);
  row.latency_ns = SecondsToNs(lat.seconds) * batch_count;
  if (lat.extrapolated) row.flags.push_back("extrapolated");
  if (batch_count > 1) row.flags.push_back("batched");
  if (lat.clamped) row.flags.push_back("clamped");
}

}  // namespace

int64_t SecondsToNs(double seconds) {
  // nearbyint honors the default round-to-nearest-even mode.
  return static_cast<int64_t>(std::nearbyint(seconds * 1e9));
}

CalibrationModel LoadCalibration(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingCalibrationError("cannot open calibration file '" + path +
                                  "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return CalibrationFromJson(ss.str());
}

LatencyReport EstimateModule(std::string_view mlir_text,
                             const CalibrationModel& calibration,
                             const std::string& models_dir,
                             const ArrayConfig& array) {
  if (!models_dir.empty() && !std::filesystem::is_directory(models_dir)) {
    throw MissingCalibrationError("model directory '" + models_dir +
                                  "' does not exist");
  }
  LatencyReport report;
  report.metadata.array = array.ToString();
  report.metadata.dataflow = std::string(DataflowName(array.dataflow));
  report.metadata.calibration_target = calibration.target_label;

  ModelCache models(models_dir);
  for (const OpInfo& info : ParseModule(mlir_text)) {
    const ClassifiedOp op = Classify(info);
    OpReport row;
    row.source_line = info.source_line;
    row.op_kind = info.op_kind;
    row.op_class = std::string(op.ClassName());
    row.model_used = "none";

    if (const auto* gemm = std::get_if<GemmOp>(&op.cls)) {
      CostSystolic(row, GemmCycles(gemm->shape, array), gemm->batch_count,
                   calibration);
    } else if (const auto* conv = std::get_if<ConvOp>(&op.cls)) {
      CostSystolic(row, ConvCycles(conv->shape, array), 1, calibration);
    } else if (const auto* ew = std::get_if<ElementwiseOp>(&op.cls)) {
      std::string reason;
      const GbdtModel* model = models.Get(ew->tag, &reason);
      if (model == nullptr) {
        MarkUnsupported(row, reason);
      } else {
        row.model_used = "gbdt:" + ew->tag;
        row.latency_ns = SecondsToNs(PredictLatency(*model, ew->type.dims));
        if (Featurize(ew->type.dims).rank_folded) {
          row.flags.push_back("rank_folded");
        }
        if (model->dtype != DTypeName(ew->type.dtype)) {
          row.flags.push_back("dtype_mismatch");
        }
      }
    } else {
      MarkUnsupported(row, std::get<UnsupportedOp>(op.cls).reason);
    }
    spdlog::debug("line {}: {} -> {} {} ns", row.source_line, row.op_kind,
                  row.op_class, row.latency_ns);
    report.per_op.push_back(std::move(row));
  }

  ReportTotals& t = report.totals;
  for (const OpReport& row : report.per_op) {
    ++t.op_count;
    if (row.op_class == "unsupported") {
      ++t.unsupported_count;
    } else if (row.op_class == "elementwise") {
      t.elementwise_ns += row.latency_ns;
    } else {
      t.systolic_ns += row.latency_ns;
    }
  }
  t.total_ns = t.systolic_ns + t.elementwise_ns;
  t.coverage_fraction =
      t.op_count == 0
          ? 1.0
          : static_cast<double>(t.op_count - t.unsupported_count) / t.op_count;
  return report;
}

}  // namespace sle
