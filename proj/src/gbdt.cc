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

#include "sle/gbdt.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sle/csv.h"
#include "sle/errors.h"
#include "sle/metrics.h"
#include "sle/random.h"

namespace sle {
namespace {

using Bins = std::array<uint8_t, kNumFeatures>;

Bins BinRow(const BinMapper& mapper, const FeatureVector& fv) {
  Bins b{};
  for (int f = 0; f < kNumFeatures; ++f) b[f] = mapper.Bin(f, fv.values[f]);
  return b;
}

void ValidateParams(const GbdtParams& p) {
  if (p.n_trees < 0 || !(p.learning_rate > 0.0 && p.learning_rate <= 1.0) ||
      p.max_depth < 1 || p.min_samples_leaf < 1 || p.max_bins < 2 ||
      p.max_bins > 256 || !(p.subsample > 0.0 && p.subsample <= 1.0)) {
    throw Error(
        "invalid hyperparameters: need n_trees >= 0, 0 < learning_rate <= 1, "
        "max_depth >= 1, min_samples_leaf >= 1, 2 <= max_bins <= 256, "
        "0 < subsample <= 1");
  }
}

struct BinStats {
  double sum = 0.0;
  int64_t count = 0;
};

struct Split {
  int feature = -1;
  int bin = -1;
  double gain = 0.0;
};

// Grows one depth-wise tree on the residuals of the rows in `rows`.
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<Bins>& bins, const std::vector<double>& resid,
              const BinMapper& mapper, const GbdtParams& params, int threads)
      : bins_(bins),
        resid_(resid),
        mapper_(mapper),
        params_(params),
        threads_(std::max(1, std::min(threads, kNumFeatures))) {}

  Tree Build(std::vector<size_t> rows) {
    Tree tree;
    Grow(tree, rows, 0);
    return tree;
  }

 private:
  // Returns the child reference for the subtree over `rows`.
  int Grow(Tree& tree, std::vector<size_t>& rows, int depth) {
    double total = 0.0;
    for (size_t r : rows) total += resid_[r];
    const Split split = depth < params_.max_depth ? BestSplit(rows, total)
                                                  : Split{};
    if (split.feature < 0) {
      tree.leaves.push_back(total / static_cast<double>(rows.size()));
      return -static_cast<int>(tree.leaves.size());
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({split.feature, split.bin, 0, 0});
    std::vector<size_t> left, right;
    for (size_t r : rows) {
      (bins_[r][split.feature] <= split.bin ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = Grow(tree, left, depth + 1);
    const int rr = Grow(tree, right, depth + 1);
    tree.nodes[id].left = l;
    tree.nodes[id].right = rr;
    return id;
  }

  // Each feature's histogram is built and scanned independently, so the
  // result does not depend on how features are spread over threads. Ties
  // go to the lowest (feature, bin).
  Split BestSplit(const std::vector<size_t>& rows, double total) const {
    std::array<Split, kNumFeatures> per_feature{};
    auto work = [&](int f) {
      per_feature[f] = ScanFeature(rows, total, f);
    };
    if (threads_ == 1 || rows.size() < 512) {
      for (int f = 0; f < kNumFeatures; ++f) work(f);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads_; ++t) {
        pool.emplace_back([&, t] {
          for (int f = t; f < kNumFeatures; f += threads_) work(f);
        });
      }
      for (auto& th : pool) th.join();
    }
    Split best;
    for (const Split& s : per_feature) {
      if (s.feature >= 0 && s.gain > best.gain) best = s;
    }
    return best;
  }

  Split ScanFeature(const std::vector<size_t>& rows, double total,
                    int f) const {
    const int nb = mapper_.NumBins(f);
    std::vector<BinStats> hist(nb);
    for (size_t r : rows) {
      BinStats& h = hist[bins_[r][f]];
      h.sum += resid_[r];
      ++h.count;
    }
    const double n = static_cast<double>(rows.size());
    const double parent = total * total / n;
    Split best;
    double left_sum = 0.0;
    int64_t left_count = 0;
    const int64_t min_leaf = params_.min_samples_leaf;
    for (int b = 0; b + 1 < nb; ++b) {
      left_sum += hist[b].sum;
      left_count += hist[b].count;
      const int64_t right_count = static_cast<int64_t>(rows.size()) - left_count;
      if (left_count < min_leaf) continue;
      if (right_count < min_leaf) break;
      if (hist[b].count == 0) continue;  // same partition as an earlier bin
      const double right_sum = total - left_sum;
      const double gain = left_sum * left_sum / left_count +
                          right_sum * right_sum / right_count - parent;
      if (gain > best.gain) {
        best = {f, b, gain};
      }
    }
    return best;
  }

  const std::vector<Bins>& bins_;
  const std::vector<double>& resid_;
  const BinMapper& mapper_;
  const GbdtParams& params_;
  int threads_;
};

int SubtreeDepth(const Tree& tree, int ref) {
  if (ref < 0) return 0;
  const TreeNode& n = tree.nodes[ref];
  return 1 + std::max(SubtreeDepth(tree, n.left), SubtreeDepth(tree, n.right));
}

double Mse(const std::vector<double>& resid) {
  double s = 0.0;
  for (double r : resid) s += r * r;
  return s / static_cast<double>(resid.size());
}

[[noreturn]] void Malformed(const std::string& what) {
  throw FormatError("malformed model file: " + what);
}

// Checks that a deserialized tree is a proper binary tree whose references
// are in range, reach every node and leaf exactly once, and stay within
// max_depth.
void ValidateTree(const Tree& tree, const BinMapper& mapper, int max_depth) {
  if (tree.leaves.size() != tree.nodes.size() + 1) {
    Malformed("tree must have exactly one more leaf than internal nodes");
  }
  for (double v : tree.leaves) {
    if (!std::isfinite(v)) Malformed("non-finite leaf value");
  }
  std::vector<int> node_refs(tree.nodes.size(), 0);
  std::vector<int> leaf_refs(tree.leaves.size(), 0);
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    if (n.feature < 0 || n.feature >= kNumFeatures) {
      Malformed("feature index out of range");
    }
    if (n.split_bin < 0 || n.split_bin + 1 >= mapper.NumBins(n.feature)) {
      Malformed("split bin out of range");
    }
    for (int c : {n.left, n.right}) {
      if (c >= 0) {
        // Children always follow their parent, which rules out cycles.
        if (c <= static_cast<int>(i) ||
            c >= static_cast<int>(tree.nodes.size())) {
          Malformed("bad node reference");
        }
        ++node_refs[c];
      } else {
        const int leaf = -c - 1;
        if (leaf >= static_cast<int>(tree.leaves.size())) {
          Malformed("bad leaf reference");
        }
        ++leaf_refs[leaf];
      }
    }
  }
  for (size_t i = 1; i < node_refs.size(); ++i) {
    if (node_refs[i] != 1) Malformed("node not referenced exactly once");
  }
  if (!node_refs.empty() && node_refs[0] != 0) Malformed("root is referenced");
  if (!tree.nodes.empty()) {
    for (int c : leaf_refs) {
      if (c != 1) Malformed("leaf not referenced exactly once");
    }
  }
  if (tree.Depth() > max_depth) Malformed("tree deeper than max_depth");
}

}  // namespace

FeatureVector Featurize(std::span<const int64_t> dims) {
  FeatureVector fv;
  std::array<int64_t, 4> padded = {1, 1, 1, 1};
  double total = 1.0;
  for (size_t i = 0; i < dims.size(); ++i) {
    total *= static_cast<double>(dims[i]);
    if (i < 4) {
      padded[i] = dims[i];
    } else {
      padded[3] *= dims[i];
      fv.rank_folded = true;
    }
  }
  fv.values[0] = std::log2(total + 1.0);
  fv.values[1] = static_cast<double>(dims.size());
  for (int i = 0; i < 4; ++i) fv.values[2 + i] = static_cast<double>(padded[i]);
  return fv;
}

BinMapper::BinMapper(std::array<std::vector<double>, kNumFeatures> thresholds)
    : thresholds_(std::move(thresholds)) {
  for (const auto& t : thresholds_) {
    if (t.size() > 255) throw FormatError("more than 255 bin thresholds");
    for (size_t i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i]) || (i > 0 && !(t[i - 1] < t[i]))) {
        throw FormatError("bin thresholds must be finite and increasing");
      }
    }
  }
}

BinMapper BinMapper::FromTrainingRows(std::span<const FeatureVector> rows,
                                      int max_bins) {
  std::array<std::vector<double>, kNumFeatures> thresholds;
  for (int f = 0; f < kNumFeatures; ++f) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r.values[f]);
    std::sort(v.begin(), v.end());
    std::vector<double> distinct = v;
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    std::vector<double>& out = thresholds[f];
    if (static_cast<int>(distinct.size()) <= max_bins) {
      for (size_t i = 1; i < distinct.size(); ++i) {
        out.push_back(0.5 * (distinct[i - 1] + distinct[i]));
      }
      continue;
    }
    // Sample quantiles: cut after the value at each 1/max_bins fraction,
    // halfway to the next distinct value.
    const size_t n = v.size();
    for (int q = 1; q < max_bins; ++q) {
      const size_t idx = static_cast<size_t>(q) * n / max_bins;
      const double a = v[idx == 0 ? 0 : idx - 1];
      auto next = std::upper_bound(distinct.begin(), distinct.end(), a);
      if (next == distinct.end()) break;
      const double t = 0.5 * (a + *next);
      if (out.empty() || out.back() < t) out.push_back(t);
    }
  }
  return BinMapper(std::move(thresholds));
}

uint8_t BinMapper::Bin(int feature, double value) const {
  const auto& t = thresholds_[feature];
  return static_cast<uint8_t>(std::lower_bound(t.begin(), t.end(), value) -
                              t.begin());
}

double Tree::Evaluate(const Bins& bins) const {
  if (nodes.empty()) return leaves[0];
  int ref = 0;
  while (ref >= 0) {
    const TreeNode& n = nodes[ref];
    ref = bins[n.feature] <= n.split_bin ? n.left : n.right;
  }
  return leaves[-ref - 1];
}

int Tree::Depth() const { return nodes.empty() ? 0 : SubtreeDepth(*this, 0); }

GbdtModel Train(const std::vector<ElementwiseSample>& samples,
                const GbdtParams& params, const TrainOptions& options) {
  ValidateParams(params);
  if (samples.size() < kMinTrainingSamples) {
    throw InsufficientDataError(
        "elementwise training needs at least " +
        std::to_string(kMinTrainingSamples) + " samples, got " +
        std::to_string(samples.size()));
  }
  GbdtModel model;
  model.op_tag = samples.front().op_tag;
  model.params = params;
  for (const auto& s : samples) {
    if (s.op_tag != model.op_tag) {
      throw Error("training samples mix op tags '" + model.op_tag + "' and '" +
                  s.op_tag + "'");
    }
    if (!(s.latency_s > 0.0)) throw Error("sample latency must be positive");
  }

  std::vector<FeatureVector> features;
  std::vector<double> y_us;
  for (const auto& s : samples) {
    features.push_back(Featurize(s.shape));
    y_us.push_back(s.latency_s * 1e6);
  }
  model.bin_mapper = BinMapper::FromTrainingRows(features, params.max_bins);
  std::vector<Bins> bins;
  for (const auto& fv : features) bins.push_back(BinRow(model.bin_mapper, fv));

  model.base_score_us =
      std::accumulate(y_us.begin(), y_us.end(), 0.0) / y_us.size();
  std::vector<double> resid(y_us.size());
  bool constant = true;
  for (size_t i = 0; i < y_us.size(); ++i) {
    resid[i] = y_us[i] - model.base_score_us;
    constant = constant && y_us[i] == y_us[0];
  }
  if (options.mse_history) options.mse_history->push_back(Mse(resid));
  if (constant) return model;

  std::vector<size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  Rng rng(params.seed);
  const size_t subsample_n = std::max<size_t>(
      1, static_cast<size_t>(params.subsample * static_cast<double>(all.size())));

  TreeBuilder builder(bins, resid, model.bin_mapper, model.params,
                      options.threads);
  for (int t = 0; t < params.n_trees; ++t) {
    std::vector<size_t> rows = all;
    if (subsample_n < rows.size()) {
      for (size_t i = 0; i < subsample_n; ++i) {
        std::swap(rows[i], rows[i + rng.Below(rows.size() - i)]);
      }
      rows.resize(subsample_n);
      std::sort(rows.begin(), rows.end());
    }
    Tree tree = builder.Build(std::move(rows));
    for (size_t i = 0; i < resid.size(); ++i) {
      resid[i] -= params.learning_rate * tree.Evaluate(bins[i]);
    }
    model.trees.push_back(std::move(tree));
    if (options.mse_history) options.mse_history->push_back(Mse(resid));
  }
  return model;
}

double PredictLatency(const GbdtModel& model, std::span<const int64_t> shape) {
  const Bins b = BinRow(model.bin_mapper, Featurize(shape));
  double sum = 0.0;
  for (const Tree& t : model.trees) sum += t.Evaluate(b);
  const double us = model.base_score_us + model.params.learning_rate * sum;
  return std::max(us, 0.0) * 1e-6;
}

ElementwiseEvaluation EvaluateModel(
    const GbdtModel& model, const std::vector<ElementwiseSample>& holdout) {
  if (holdout.empty()) throw Error("holdout set is empty");
  std::vector<double> actual, predicted, abs_err, rel_err;
  for (const auto& s : holdout) {
    const double p = PredictLatency(model, s.shape);
    actual.push_back(s.latency_s);
    predicted.push_back(p);
    abs_err.push_back(std::abs(p - s.latency_s));
    rel_err.push_back(abs_err.back() / s.latency_s);
  }
  ElementwiseEvaluation e;
  e.r2 = ComputeRegressionMetrics(actual, predicted).r2;
  e.max_rel_error = *std::max_element(rel_err.begin(), rel_err.end());
  e.median_abs_error_s = Median(std::move(abs_err));
  e.median_rel_error = Median(std::move(rel_err));
  e.n = static_cast<int>(holdout.size());
  return e;
}

std::string ModelToJson(const GbdtModel& model) {
  nlohmann::ordered_json j;
  j["schema_version"] = kModelSchemaVersion;
  j["op_tag"] = model.op_tag;
  j["dtype"] = model.dtype;
  const GbdtParams& p = model.params;
  j["hyperparameters"] = {{"n_trees", p.n_trees},
                          {"learning_rate", p.learning_rate},
                          {"max_depth", p.max_depth},
                          {"min_samples_leaf", p.min_samples_leaf},
                          {"max_bins", p.max_bins},
                          {"seed", p.seed},
                          {"subsample", p.subsample}};
  j["base_score_us"] = model.base_score_us;
  auto& th = j["bin_thresholds"] = nlohmann::ordered_json::array();
  for (int f = 0; f < kNumFeatures; ++f) {
    th.push_back(model.bin_mapper.Thresholds(f));
  }
  auto& trees = j["trees"] = nlohmann::ordered_json::array();
  for (const Tree& t : model.trees) {
    nlohmann::ordered_json jt;
    auto& nodes = jt["nodes"] = nlohmann::ordered_json::array();
    for (const TreeNode& n : t.nodes) {
      nodes.push_back({n.feature, n.split_bin, n.left, n.right});
    }
    jt["leaves"] = t.leaves;
    trees.push_back(std::move(jt));
  }
  return j.dump() + "\n";
}

GbdtModel ModelFromJson(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) Malformed("top level is not an object");
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw FormatError("unsupported model schema_version " +
                        std::to_string(version) + " (expected " +
                        std::to_string(kModelSchemaVersion) + ")");
    }
    GbdtModel model;
    model.op_tag = j.at("op_tag").get<std::string>();
    model.dtype = j.at("dtype").get<std::string>();
    const auto& h = j.at("hyperparameters");
    model.params.n_trees = h.at("n_trees").get<int>();
    model.params.learning_rate = h.at("learning_rate").get<double>();
    model.params.max_depth = h.at("max_depth").get<int>();
    model.params.min_samples_leaf = h.at("min_samples_leaf").get<int>();
    model.params.max_bins = h.at("max_bins").get<int>();
    model.params.seed = h.at("seed").get<uint64_t>();
    model.params.subsample = h.at("subsample").get<double>();
    try {
      ValidateParams(model.params);
    } catch (const Error& e) {
      Malformed(e.what());
    }
    model.base_score_us = j.at("base_score_us").get<double>();
    if (!std::isfinite(model.base_score_us)) Malformed("non-finite base score");

    const auto& th = j.at("bin_thresholds");
    if (!th.is_array() || th.size() != kNumFeatures) {
      Malformed("bin_thresholds must list " + std::to_string(kNumFeatures) +
                " features");
    }
    std::array<std::vector<double>, kNumFeatures> thresholds;
    for (int f = 0; f < kNumFeatures; ++f) {
      thresholds[f] = th[f].get<std::vector<double>>();
    }
    model.bin_mapper = BinMapper(std::move(thresholds));

    const auto& trees = j.at("trees");
    if (!trees.is_array()) Malformed("trees is not an array");
    if (static_cast<int>(trees.size()) > model.params.n_trees) {
      Malformed("more trees than n_trees");
    }
    for (const auto& jt : trees) {
      Tree t;
      for (const auto& jn : jt.at("nodes")) {
        if (!jn.is_array() || jn.size() != 4) Malformed("node is not a 4-tuple");
        t.nodes.push_back({jn[0].get<int>(), jn[1].get<int>(),
                           jn[2].get<int>(), jn[3].get<int>()});
      }
      t.leaves = jt.at("leaves").get<std::vector<double>>();
      ValidateTree(t, model.bin_mapper, model.params.max_depth);
      model.trees.push_back(std::move(t));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    Malformed(e.what());
  }
}

void SaveModel(const GbdtModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << ModelToJson(model);
  if (!out) throw Error("failed writing '" + path + "'");
}

GbdtModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ModelFromJson(ss.str());
}

std::vector<ElementwiseSample> ReadElementwiseSamples(std::istream& in) {
  std::vector<ElementwiseSample> samples;
  for (const CsvRow& row : ReadCsv(in, {"op", "shape", "latency_us"})) {
    ElementwiseSample s;
    s.op_tag = row.fields[0];
    s.shape = ParseShapeField(row.fields[1]);
    s.latency_s = ParseCsvDouble(row, 2) * 1e-6;
    if (s.op_tag.empty() || !(s.latency_s > 0.0)) {
      throw FormatError("line " + std::to_string(row.line) +
                        ": op must be named and latency positive");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void WriteElementwiseSamples(std::ostream& out,
                             const std::vector<ElementwiseSample>& samples) {
  out << "op,shape,latency_us\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.17g", s.latency_s * 1e6);
    out << s.op_tag << ',' << FormatShapeField(s.shape) << ',' << buf << '\n';
  }
}

}  // namespace sle
