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

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "sle/errors.h"
#include "sle/estimator.h"

namespace sle {
namespace {

std::string Micros(int64_t ns) {
  const char* sign = ns < 0 ? "-" : "";
  const int64_t a = ns < 0 ? -ns : ns;
  return fmt::format("{}{}.{:03d}", sign, a / 1000, a % 1000);
}

std::string JoinFlags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string EmitJson(const LatencyReport& r) {
  using J = nlohmann::ordered_json;
  J j;
  j["metadata"] = {{"array", r.metadata.array},
                   {"dataflow", r.metadata.dataflow},
                   {"calibration_target", r.metadata.calibration_target},
                   {"composition", r.metadata.composition},
                   {"cycle_model", r.metadata.cycle_model}};
  J& ops = j["per_op"] = J::array();
  for (const OpReport& op : r.per_op) {
    J o;
    o["source_line"] = op.source_line;
    o["op_kind"] = op.op_kind;
    o["class"] = op.op_class;
    o["cycles"] = op.cycles ? J(*op.cycles) : J(nullptr);
    o["batch_count"] = op.batch_count;
    o["latency_ns"] = op.latency_ns;
    o["latency_us"] = J::parse(Micros(op.latency_ns));
    o["regime"] = op.regime ? J(*op.regime) : J(nullptr);
    o["model_used"] = op.model_used;
    o["flags"] = op.flags;
    o["reason"] = op.reason;
    ops.push_back(std::move(o));
  }
  const ReportTotals& t = r.totals;
  j["totals"] = {{"systolic_latency_ns", t.systolic_ns},
                 {"elementwise_latency_ns", t.elementwise_ns},
                 {"total_latency_ns", t.total_ns},
                 {"total_latency_us", J::parse(Micros(t.total_ns))},
                 {"op_count", t.op_count},
                 {"unsupported_count", t.unsupported_count},
                 {"coverage_fraction", t.coverage_fraction}};
  return j.dump(2) + "\n";
}

std::string EmitCsv(const LatencyReport& r) {
  std::ostringstream out;
  out << "source_line,op_kind,class,cycles,batch_count,latency_us,regime,"
         "model_used,flags,reason\n";
  for (const OpReport& op : r.per_op) {
    out << op.source_line << ',' << CsvField(op.op_kind) << ','
        << op.op_class << ',' << (op.cycles ? std::to_string(*op.cycles) : "")
        << ',' << op.batch_count << ',' << Micros(op.latency_ns) << ','
        << op.regime.value_or("") << ',' << CsvField(op.model_used) << ','
        << JoinFlags(op.flags) << ',' << CsvField(op.reason) << '\n';
  }
  const ReportTotals& t = r.totals;
  out << ",TOTAL,,,," << Micros(t.total_ns) << ",,,"
      << fmt::format("unsupported={};coverage={:.4f}", t.unsupported_count,
                     t.coverage_fraction)
      << ",\n";
  return out.str();
}

std::string EmitHuman(const LatencyReport& r) {
  const std::vector<std::string> header = {"line",  "op",     "class",
                                           "cycles", "latency_us", "regime",
                                           "model", "flags"};
  std::vector<std::vector<std::string>> rows;
  for (const OpReport& op : r.per_op) {
    std::string flags = JoinFlags(op.flags);
    if (!op.reason.empty()) flags += " (" + op.reason + ")";
    rows.push_back({std::to_string(op.source_line), op.op_kind, op.op_class,
                    op.cycles ? std::to_string(*op.cycles) : "-",
                    Micros(op.latency_ns), op.regime.value_or("-"),
                    op.model_used, flags});
  }
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  out << "array " << r.metadata.array << " " << r.metadata.dataflow
      << ", calibration " << r.metadata.calibration_target << ", "
      << r.metadata.composition << ", " << r.metadata.cycle_model << "\n";
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      // Numbers right-aligned, text left-aligned; the last column unpadded.
      const bool numeric = c == 0 || c == 3 || c == 4;
      if (c + 1 == row.size()) {
        line += row[c];
      } else if (numeric) {
        line += fmt::format("{:>{}}  ", row[c], width[c]);
      } else {
        line += fmt::format("{:<{}}  ", row[c], width[c]);
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  const ReportTotals& t = r.totals;
  out << fmt::format(
      "systolic {} us, elementwise {} us, total {} us; {} of {} ops "
      "unsupported, coverage {:.4f}\n",
      Micros(t.systolic_ns), Micros(t.elementwise_ns), Micros(t.total_ns),
      t.unsupported_count, t.op_count, t.coverage_fraction);
  return out.str();
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "human") return ReportFormat::kHuman;
  throw Error("unknown report format '" + std::string(name) +
              "' (expected json, csv or human)");
}

std::string EmitReport(const LatencyReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return EmitJson(report);
    case ReportFormat::kCsv:
      return EmitCsv(report);
    case ReportFormat::kHuman:
      return EmitHuman(report);
  }
  return {};
}

LatencyReport ReportFromJson(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    LatencyReport r;
    const auto& m = j.at("metadata");
    r.metadata.array = m.at("array").get<std::string>();
    r.metadata.dataflow = m.at("dataflow").get<std::string>();
    r.metadata.calibration_target = m.at("calibration_target").get<std::string>();
    r.metadata.composition = m.at("composition").get<std::string>();
    r.metadata.cycle_model = m.at("cycle_model").get<std::string>();
    for (const auto& o : j.at("per_op")) {
      OpReport op;
      op.source_line = o.at("source_line").get<int>();
      op.op_kind = o.at("op_kind").get<std::string>();
      op.op_class = o.at("class").get<std::string>();
      if (!o.at("cycles").is_null()) op.cycles = o.at("cycles").get<int64_t>();
      op.batch_count = o.at("batch_count").get<int64_t>();
      op.latency_ns = o.at("latency_ns").get<int64_t>();
      if (!o.at("regime").is_null()) {
        op.regime = o.at("regime").get<std::string>();
      }
      op.model_used = o.at("model_used").get<std::string>();
      op.flags = o.at("flags").get<std::vector<std::string>>();
      op.reason = o.at("reason").get<std::string>();
      r.per_op.push_back(std::move(op));
    }
    const auto& t = j.at("totals");
    r.totals.systolic_ns = t.at("systolic_latency_ns").get<int64_t>();
    r.totals.elementwise_ns = t.at("elementwise_latency_ns").get<int64_t>();
    r.totals.total_ns = t.at("total_latency_ns").get<int64_t>();
    r.totals.op_count = t.at("op_count").get<int>();
    r.totals.unsupported_count = t.at("unsupported_count").get<int>();
    r.totals.coverage_fraction = t.at("coverage_fraction").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace sle
