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

// sle: StableHLO latency estimation from the command line.
//
// Exit status: 0 success, 1 usage or runtime error, 2 StableHLO parse error,
// 3 missing or unreadable calibration / model inputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "sle/calibration.h"
#include "sle/classify.h"
#include "sle/csv.h"
#include "sle/errors.h"
#include "sle/estimator.h"
#include "sle/gbdt.h"
#include "sle/log.h"
#include "sle/random.h"
#include "sle/stablehlo_parser.h"
#include "sle/systolic_model.h"
#include "sle/systolic_oracle.h"
#include "sle/workload.h"

namespace sle {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitMissingInput = 3;

// Thrown for inputs that must exist before any work can start.
class MissingInput : public Error {
 public:
  using Error::Error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or to standard output when it is empty or "-".
void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
}

ArrayConfig MakeArray(const std::string& geometry, const std::string& flow) {
  ArrayConfig cfg = ParseArrayGeometry(geometry);
  cfg.dataflow = ParseDataflow(flow);
  return cfg;
}

std::string CycleJson(const CycleEstimate& e, const ArrayConfig& cfg) {
  return fmt::format(
      "{{\"array\":\"{}\",\"dataflow\":\"{}\",\"m\":{},\"k\":{},\"n\":{},"
      "\"total_cycles\":{},\"tiles\":{},\"utilization\":{:.6f}}}\n",
      cfg.ToString(), DataflowName(cfg.dataflow), e.gemm.m, e.gemm.k,
      e.gemm.n, e.total_cycles, e.tiles, e.utilization);
}

struct ArrayFlags {
  std::string geometry = "128x128";
  std::string dataflow = "os";

  void Add(CLI::App* app) {
    app->add_option("--array", geometry, "Systolic array geometry RxC")
        ->capture_default_str();
    app->add_option("--dataflow", dataflow, "os or ws")
        ->check(CLI::IsMember({"os", "ws"}))
        ->capture_default_str();
  }
};

int Run(int argc, char** argv) {
  CLI::App app{"Latency estimation for StableHLO programs"};
  app.require_subcommand(1);
  std::string output;

  // parse
  std::string parse_input;
  CLI::App* parse = app.add_subcommand(
      "parse", "Print one classified JSON record per operation");
  parse->add_option("module", parse_input, "StableHLO text file")->required();

  // gemm / oracle
  GemmShape gemm_shape{1, 1, 1};
  ArrayFlags gemm_array, oracle_array;
  CLI::App* gemm = app.add_subcommand("gemm", "Closed-form systolic cycles");
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Register-level cycle simulation (small arrays only)");
  for (CLI::App* sub : {gemm, oracle}) {
    sub->add_option("-m,--m", gemm_shape.m, "Rows of A")
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("-k,--k", gemm_shape.k, "Contraction length")
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("-n,--n", gemm_shape.n, "Columns of B")
        ->required()
        ->check(CLI::PositiveNumber);
  }
  gemm_array.Add(gemm);
  std::string gemm_cal;
  gemm->add_option("--calibration", gemm_cal,
                   "Calibration JSON; adds the predicted latency");
  oracle_array.Add(oracle);

  // calibrate
  std::string cal_input, cal_target = "tpu-v4";
  bool cal_pooled = false;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Fit per-regime cycle-to-latency lines");
  double cal_holdout = 0.0;
  uint64_t cal_seed = 0;
  calibrate->add_option("-i,--input", cal_input,
                        "CSV with header M,K,N,cycles,latency_us")
      ->required();
  calibrate->add_option("--holdout-fraction", cal_holdout,
                        "Share of records withheld from the fit and scored")
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();
  calibrate->add_option("--seed", cal_seed, "Seed for the holdout split")
      ->capture_default_str();
  calibrate->add_option("-o,--output", output, "Calibration JSON path");
  calibrate->add_flag("--pooled", cal_pooled, "Fit one line over all regimes");
  calibrate->add_option("--target", cal_target, "Target label")
      ->capture_default_str();

  // train-elementwise
  std::string train_input, train_op;
  GbdtParams train_params;
  int train_threads = 1;
  CLI::App* train = app.add_subcommand(
      "train-elementwise", "Train a boosted-tree latency model for one op");
  train->add_option("data", train_input, "CSV with header op,shape,latency_us")
      ->required();
  train->add_option("--op", train_op,
                    "Op tag to train; rows for other tags are ignored")
      ->required();
  train->add_option("-o,--output", output, "Model JSON path");
  train->add_option("--trees", train_params.n_trees)->capture_default_str();
  train->add_option("--learning-rate", train_params.learning_rate)
      ->capture_default_str();
  train->add_option("--max-depth", train_params.max_depth)
      ->capture_default_str();
  train->add_option("--min-samples-leaf", train_params.min_samples_leaf)
      ->capture_default_str();
  train->add_option("--max-bins", train_params.max_bins)->capture_default_str();
  train->add_option("--subsample", train_params.subsample)
      ->capture_default_str();
  train->add_option("--seed", train_params.seed)->capture_default_str();
  train->add_option("--threads", train_threads)->capture_default_str();

  // sweep
  std::string sweep_regime = "small", sweep_mode = "product";
  int64_t sweep_step = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "GEMM regime sweep as M,K,N");
  sweep->add_option("--regime", sweep_regime)
      ->check(CLI::IsMember({"small", "medium", "large"}))
      ->capture_default_str();
  sweep->add_option("--mode", sweep_mode)
      ->check(CLI::IsMember({"product", "axis"}))
      ->capture_default_str();
  sweep->add_option("--step", sweep_step, "Grid step; 0 for the default")
      ->capture_default_str();
  sweep->add_option("-o,--output", output, "CSV path");

  // elementwise-shapes
  ShapeDatasetSpec shape_spec;
  bool shapes_manual = false, no_boundary = false;
  CLI::App* shapes = app.add_subcommand(
      "elementwise-shapes", "Elementwise shape dataset as shape rows");
  shapes->add_option("--max-elements", shape_spec.max_elements)
      ->capture_default_str();
  shapes->add_option("--samples", shape_spec.samples)->capture_default_str();
  shapes->add_option("--factorizations", shape_spec.factorizations_per_size)
      ->capture_default_str();
  shapes->add_option("--seed", shape_spec.seed)->capture_default_str();
  shapes->add_flag("--no-boundary", no_boundary,
                   "Omit the power-of-two boundary family");
  shapes->add_flag("--manual", shapes_manual,
                   "Emit the fixed 1-D and 2-D sweeps instead");
  shapes->add_option("-o,--output", output, "CSV path");

  // synth
  std::string synth_kind = "gemm", synth_op = "add";
  double synth_noise = 0.0;
  uint64_t synth_seed = 0;
  int synth_samples = 1000;
  ArrayFlags synth_array;
  CLI::App* synth = app.add_subcommand(
      "synth", "Synthetic measurements from a known ground truth");
  synth->add_option("--kind", synth_kind)
      ->check(CLI::IsMember({"gemm", "elementwise"}))
      ->capture_default_str();
  synth->add_option("--noise-pct", synth_noise,
                    "Std-dev of multiplicative gaussian noise, in percent")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--op", synth_op, "Op tag for elementwise rows")
      ->capture_default_str();
  synth->add_option("--samples", synth_samples,
                    "Sizes drawn for the elementwise shape dataset")
      ->capture_default_str();
  synth_array.Add(synth);
  synth->add_option("-o,--output", output, "CSV path");

  // simulate
  std::string sim_input, sim_cal, sim_models, sim_format = "json";
  ArrayFlags sim_array;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Whole-module latency report");
  simulate->add_option("module", sim_input, "StableHLO text file")->required();
  simulate->add_option("--calibration", sim_cal, "Calibration JSON")
      ->required();
  simulate->add_option("--models", sim_models,
                       "Directory of <op>.json elementwise models");
  sim_array.Add(simulate);
  simulate->add_option("--format", sim_format)
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
  simulate->add_option("-o,--output", output, "Report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (parse->parsed()) {
    std::string text;
    for (const OpInfo& info : ParseModule(ReadFile(parse_input))) {
      text += ClassifiedOpToJson(Classify(info)) + "\n";
    }
    WriteOutput("", text);
  } else if (gemm->parsed()) {
    const ArrayConfig cfg = MakeArray(gemm_array.geometry, gemm_array.dataflow);
    const CycleEstimate est = GemmCycles(gemm_shape, cfg);
    std::string line = CycleJson(est, cfg);
    if (!gemm_cal.empty()) {
      CalibrationModel cal;
      try {
        cal = LoadCalibration(gemm_cal);
      } catch (const FormatError& e) {
        throw MissingInput(e.what());
      }
      const LatencyEstimate lat = Predict(cal, gemm_shape, est.total_cycles);
      line.resize(line.size() - 2);  // reopen the object
      line += fmt::format(
          ",\"regime\":\"{}\",\"latency_us\":{:.3f},\"extrapolated\":{}}}\n",
          RegimeName(lat.regime), SecondsToNs(lat.seconds) / 1000.0,
          lat.extrapolated);
    }
    WriteOutput("", line);
  } else if (oracle->parsed()) {
    const ArrayConfig cfg =
        MakeArray(oracle_array.geometry, oracle_array.dataflow);
    CycleEstimate e = GemmCycles(gemm_shape, cfg);
    e.total_cycles = OracleSimulate(gemm_shape, cfg);
    WriteOutput("", CycleJson(e, cfg));
  } else if (calibrate->parsed()) {
    std::ifstream in(cal_input);
    if (!in) throw MissingInput("cannot open '" + cal_input + "'");
    FitOptions opts;
    opts.pooled = cal_pooled;
    opts.target_label = cal_target;
    std::vector<MeasurementRecord> records = ReadMeasurements(in);
    std::vector<MeasurementRecord> holdout;
    if (cal_holdout > 0.0) {
      Rng rng(cal_seed);
      for (size_t i = records.size(); i > 1; --i) {
        std::swap(records[i - 1], records[rng.Below(i)]);
      }
      const size_t n_hold = static_cast<size_t>(
          cal_holdout * static_cast<double>(records.size()));
      holdout.assign(records.end() - n_hold, records.end());
      records.resize(records.size() - n_hold);
    }
    const CalibrationModel model = Fit(records, opts);
    if (!holdout.empty()) {
      const CalibrationEvaluation ev = Evaluate(model, holdout);
      auto show = [](std::string_view name, const RegressionMetrics& m) {
        std::fprintf(stderr,
                     "holdout %-7s n=%-5d r2=%.4f rmse=%.4fus mae=%.4fus "
                     "mape=%.2f%%\n",
                     std::string(name).c_str(), m.n, m.r2, m.rmse * 1e6,
                     m.mae * 1e6, m.mape);
      };
      for (const auto& [regime, m] : ev.per_regime) show(RegimeName(regime), m);
      show("pooled", ev.pooled);
    }
    for (Regime r : model.unfitted) {
      spdlog::warn("regime '{}' has fewer than two records; left unfitted",
                   RegimeName(r));
    }
    WriteOutput(output, CalibrationToJson(model));
  } else if (train->parsed()) {
    std::ifstream in(train_input);
    if (!in) throw MissingInput("cannot open '" + train_input + "'");
    std::vector<ElementwiseSample> samples;
    for (auto& s : ReadElementwiseSamples(in)) {
      if (s.op_tag == train_op) samples.push_back(std::move(s));
    }
    TrainOptions opts;
    opts.threads = train_threads;
    const GbdtModel model = Train(samples, train_params, opts);
    const ElementwiseEvaluation fit = EvaluateModel(model, samples);
    spdlog::info("trained '{}' on {} samples: {} trees, training r2 {:.5f}",
                 train_op, samples.size(), model.trees.size(), fit.r2);
    WriteOutput(output, ModelToJson(model));
  } else if (sweep->parsed()) {
    SweepSpec spec;
    spec.regime = *RegimeFromName(sweep_regime);
    spec.mode = ParseSweepMode(sweep_mode);
    spec.step = sweep_step;
    std::string text = "M,K,N\n";
    for (const GemmShape& s : GemmSweep(spec)) {
      text += fmt::format("{},{},{}\n", s.m, s.k, s.n);
    }
    WriteOutput(output, text);
  } else if (shapes->parsed()) {
    std::vector<Shape> list;
    if (shapes_manual) {
      ElementwiseSweeps s = ElementwiseManualSweeps();
      list = std::move(s.sweep_1d);
      list.insert(list.end(), s.sweep_2d.begin(), s.sweep_2d.end());
    } else {
      shape_spec.include_pow2_boundary = !no_boundary;
      list = ShapeDataset(shape_spec);
    }
    std::string text = "shape\n";
    for (const Shape& s : list) text += FormatShapeField(s) + "\n";
    WriteOutput(output, text);
  } else if (synth->parsed()) {
    std::ostringstream out;
    if (synth_kind == "gemm") {
      std::vector<GemmShape> grid;
      for (Regime r : {Regime::kSmall, Regime::kMedium, Regime::kLarge}) {
        for (const GemmShape& s : GemmSweep({r, SweepMode::kProduct, 0})) {
          grid.push_back(s);
        }
      }
      GemmGroundTruth truth = DefaultGemmGroundTruth();
      truth.array = MakeArray(synth_array.geometry, synth_array.dataflow);
      WriteMeasurements(out,
                        SynthGemmMeasurements(grid, truth, synth_noise,
                                              synth_seed));
    } else {
      ShapeDatasetSpec spec;
      spec.samples = synth_samples;
      spec.seed = synth_seed;
      WriteElementwiseSamples(
          out, SynthElementwiseMeasurements(synth_op, ShapeDataset(spec),
                                            synth_noise, synth_seed + 1));
    }
    WriteOutput(output, out.str());
  } else if (simulate->parsed()) {
    CalibrationModel cal;
    try {
      cal = LoadCalibration(sim_cal);
    } catch (const FormatError& e) {
      throw MissingInput(e.what());
    }
    std::string text;
    try {
      text = ReadFile(sim_input);
    } catch (const Error& e) {
      throw MissingInput(e.what());
    }
    const LatencyReport report = EstimateModule(
        text, cal, sim_models, MakeArray(sim_array.geometry, sim_array.dataflow));
    WriteOutput(output, EmitReport(report, ParseReportFormat(sim_format)));
  }
  return 0;
}

}  // namespace
}  // namespace sle

int main(int argc, char** argv) {
  sle::InitLogging();
  try {
    return sle::Run(argc, argv);
  } catch (const sle::SyntaxError& e) {
    std::fprintf(stderr, "sle: parse error at %s\n", e.what());
    return sle::kExitParse;
  } catch (const sle::MissingCalibrationError& e) {
    std::fprintf(stderr, "sle: %s\n", e.what());
    return sle::kExitMissingInput;
  } catch (const sle::MissingInput& e) {
    std::fprintf(stderr, "sle: %s\n", e.what());
    return sle::kExitMissingInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sle: %s\n", e.what());
    return sle::kExitUsage;
  }
}
