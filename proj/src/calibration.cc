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

#include "sle/calibration.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "sle/csv.h"
#include "sle/errors.h"

namespace sle {
namespace {

constexpr Regime kAllRegimes[] = {Regime::kSmall, Regime::kMedium,
                                  Regime::kLarge};

double ClampedLine(const LinearFit& fit, int64_t cycles, bool* clamped) {
  const double t =
      fit.alpha_s_per_cycle * static_cast<double>(cycles) + fit.beta_s;
  if (clamped != nullptr) *clamped = t < 0.0;
  return std::max(t, 0.0);
}

LinearFit FitLine(const std::vector<const MeasurementRecord*>& records,
                  std::string_view label) {
  const double n = static_cast<double>(records.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto* r : records) {
    mean_x += static_cast<double>(r->cycles);
    mean_y += r->latency_s;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto* r : records) {
    const double dx = static_cast<double>(r->cycles) - mean_x;
    sxx += dx * dx;
    sxy += dx * (r->latency_s - mean_y);
  }
  if (sxx == 0.0) {
    throw DegenerateFitError("all cycle counts in regime '" +
                             std::string(label) + "' are identical");
  }
  LinearFit fit;
  fit.alpha_s_per_cycle = sxy / sxx;
  fit.beta_s = mean_y - fit.alpha_s_per_cycle * mean_x;
  fit.n_samples = static_cast<int>(records.size());
  if (!(fit.alpha_s_per_cycle > 0.0)) {
    throw DegenerateFitError("fitted time per cycle is not positive in "
                             "regime '" + std::string(label) + "'");
  }

  std::vector<double> actual, predicted;
  for (const auto* r : records) {
    actual.push_back(r->latency_s);
    predicted.push_back(ClampedLine(fit, r->cycles, nullptr));
  }
  fit.metrics = ComputeRegressionMetrics(actual, predicted);
  return fit;
}

nlohmann::ordered_json FitToJson(const LinearFit& fit) {
  nlohmann::ordered_json j;
  j["alpha_ns_per_cycle"] = fit.alpha_s_per_cycle * 1e9;
  j["beta_us"] = fit.beta_s * 1e6;
  j["r2"] = fit.metrics.r2;
  j["rmse_us"] = fit.metrics.rmse * 1e6;
  j["mae_us"] = fit.metrics.mae * 1e6;
  j["mape_pct"] = fit.metrics.mape;
  j["n_samples"] = fit.n_samples;
  return j;
}

LinearFit FitFromJson(const nlohmann::json& j) {
  LinearFit fit;
  fit.alpha_s_per_cycle = j.at("alpha_ns_per_cycle").get<double>() * 1e-9;
  fit.beta_s = j.at("beta_us").get<double>() * 1e-6;
  fit.metrics.r2 = j.at("r2").get<double>();
  fit.metrics.rmse = j.at("rmse_us").get<double>() * 1e-6;
  fit.metrics.mae = j.at("mae_us").get<double>() * 1e-6;
  fit.metrics.mape = j.at("mape_pct").get<double>();
  fit.n_samples = j.at("n_samples").get<int>();
  fit.metrics.n = fit.n_samples;
  if (!(fit.alpha_s_per_cycle > 0.0) || fit.n_samples < 2 ||
      fit.metrics.r2 > 1.0) {
    throw FormatError("calibration entry violates alpha > 0, n_samples >= 2, "
                      "r2 <= 1");
  }
  return fit;
}

}  // namespace

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kSmall:
      return "small";
    case Regime::kMedium:
      return "medium";
    case Regime::kLarge:
      return "large";
  }
  return "?";
}

std::optional<Regime> RegimeFromName(std::string_view name) {
  for (Regime r : kAllRegimes) {
    if (RegimeName(r) == name) return r;
  }
  return std::nullopt;
}

Regime RegimeFor(int64_t max_dim) {
  if (max_dim <= kSmallUpper) return Regime::kSmall;
  if (max_dim <= kMediumUpper) return Regime::kMedium;
  return Regime::kLarge;
}

bool OutsideRegimeBounds(int64_t max_dim) {
  return max_dim < kRegimeFloor || max_dim > kRegimeCeiling;
}

CalibrationModel Fit(const std::vector<MeasurementRecord>& records,
                     const FitOptions& options) {
  CalibrationModel model;
  model.target_label = options.target_label;

  if (options.pooled) {
    std::vector<const MeasurementRecord*> all;
    for (const auto& r : records) all.push_back(&r);
    if (all.size() < 2) {
      throw InsufficientDataError("pooled calibration needs >= 2 records");
    }
    model.pooled = FitLine(all, "pooled");
    return model;
  }

  std::map<Regime, std::vector<const MeasurementRecord*>> groups;
  for (const auto& r : records) groups[RegimeFor(r.gemm)].push_back(&r);
  for (Regime regime : kAllRegimes) {
    const auto& group = groups[regime];
    if (group.size() < 2) {
      model.unfitted.push_back(regime);
      continue;
    }
    model.regimes[regime] = FitLine(group, RegimeName(regime));
  }
  return model;
}

LatencyEstimate Predict(const CalibrationModel& model, const GemmShape& shape,
                        int64_t cycles) {
  LatencyEstimate est;
  est.regime = RegimeFor(shape);
  est.extrapolated = OutsideRegimeBounds(shape.max_dim());
  const LinearFit* fit = nullptr;
  if (model.pooled) {
    fit = &*model.pooled;
  } else if (auto it = model.regimes.find(est.regime);
             it != model.regimes.end()) {
    fit = &it->second;
  }
  if (fit == nullptr) {
    throw MissingRegimeError("calibration has no fit for regime '" +
                             std::string(RegimeName(est.regime)) + "'");
  }
  est.seconds = ClampedLine(*fit, cycles, &est.clamped);
  return est;
}

CalibrationEvaluation Evaluate(const CalibrationModel& model,
                               const std::vector<MeasurementRecord>& holdout) {
  std::map<Regime, std::pair<std::vector<double>, std::vector<double>>> split;
  std::vector<double> actual, predicted;
  for (const auto& r : holdout) {
    const LatencyEstimate est = Predict(model, r.gemm, r.cycles);
    split[est.regime].first.push_back(r.latency_s);
    split[est.regime].second.push_back(est.seconds);
    actual.push_back(r.latency_s);
    predicted.push_back(est.seconds);
  }
  CalibrationEvaluation out;
  for (const auto& [regime, ys] : split) {
    out.per_regime[regime] = ComputeRegressionMetrics(ys.first, ys.second);
  }
  out.pooled = ComputeRegressionMetrics(actual, predicted);
  return out;
}

std::vector<MeasurementRecord> ReadMeasurements(std::istream& in) {
  std::vector<MeasurementRecord> records;
  for (const CsvRow& row :
       ReadCsv(in, {"M", "K", "N", "cycles", "latency_us"})) {
    MeasurementRecord r;
    r.gemm = GemmShape{ParseCsvInt(row, 0), ParseCsvInt(row, 1),
                       ParseCsvInt(row, 2)};
    r.cycles = ParseCsvInt(row, 3);
    r.latency_s = ParseCsvDouble(row, 4) * 1e-6;
    if (r.gemm.m < 1 || r.gemm.k < 1 || r.gemm.n < 1 || r.cycles <= 0 ||
        !(r.latency_s > 0.0)) {
      throw FormatError("line " + std::to_string(row.line) +
                        ": dims, cycles and latency must be positive");
    }
    records.push_back(r);
  }
  return records;
}

void WriteMeasurements(std::ostream& out,
                       const std::vector<MeasurementRecord>& records) {
  out << "M,K,N,cycles,latency_us\n";
  char buf[64];
  for (const auto& r : records) {
    // %.17g round-trips the microsecond value.
    std::snprintf(buf, sizeof(buf), "%.17g", r.latency_s * 1e6);
    out << r.gemm.m << ',' << r.gemm.k << ',' << r.gemm.n << ',' << r.cycles
        << ',' << buf << '\n';
  }
}

std::string CalibrationToJson(const CalibrationModel& model) {
  nlohmann::ordered_json j;
  j["target_label"] = model.target_label;
  j["regimes"] = nlohmann::ordered_json::object();
  if (model.pooled) {
    j["regimes"]["pooled"] = FitToJson(*model.pooled);
  }
  for (const auto& [regime, fit] : model.regimes) {
    j["regimes"][std::string(RegimeName(regime))] = FitToJson(fit);
  }
  if (!model.unfitted.empty()) {
    auto& list = j["unfitted"] = nlohmann::ordered_json::array();
    for (Regime r : model.unfitted) list.push_back(RegimeName(r));
  }
  return j.dump(2) + "\n";
}

CalibrationModel CalibrationFromJson(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    CalibrationModel model;
    model.target_label = j.at("target_label").get<std::string>();
    for (const auto& [key, value] : j.at("regimes").items()) {
      if (key == "pooled") {
        model.pooled = FitFromJson(value);
        continue;
      }
      auto regime = RegimeFromName(key);
      if (!regime) throw FormatError("unknown regime '" + key + "'");
      model.regimes[*regime] = FitFromJson(value);
    }
    if (j.contains("unfitted")) {
      for (const auto& name : j.at("unfitted")) {
        auto regime = RegimeFromName(name.get<std::string>());
        if (regime) model.unfitted.push_back(*regime);
      }
    }
    if (!model.pooled && model.regimes.empty()) {
      throw FormatError("calibration file has no fitted regimes");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed calibration file: ") + e.what());
  }
}

}  // namespace sle
