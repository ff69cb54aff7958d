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

#ifndef SLE_GBDT_H_
#define SLE_GBDT_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sle {

// Histogram gradient-boosted regression trees for elementwise-op latency.

inline constexpr int kNumFeatures = 6;

// f0 = log2(elements + 1), f1 = rank, f2..f5 = dims padded with 1 to four
// entries; for rank > 4 the trailing dims are folded into the fourth.
struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  bool rank_folded = false;
};

FeatureVector Featurize(std::span<const int64_t> dims);

// Per-feature quantile thresholds. bin(x) = number of thresholds < x, so at
// most 255 thresholds give at most 256 bins and binning is monotone.
class BinMapper {
 public:
  BinMapper() = default;
  explicit BinMapper(std::array<std::vector<double>, kNumFeatures> thresholds);

  static BinMapper FromTrainingRows(std::span<const FeatureVector> rows,
                                    int max_bins);

  uint8_t Bin(int feature, double value) const;
  int NumBins(int feature) const {
    return static_cast<int>(thresholds_[feature].size()) + 1;
  }
  const std::vector<double>& Thresholds(int feature) const {
    return thresholds_[feature];
  }

 private:
  std::array<std::vector<double>, kNumFeatures> thresholds_;
};

// Internal node: rows with bin(feature) <= split_bin go left. A child
// reference c >= 0 names nodes[c]; c < 0 names leaves[-c - 1]. A tree with
// no nodes is the single leaf leaves[0].
struct TreeNode {
  int feature = 0;
  int split_bin = 0;
  int left = -1;
  int right = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<double> leaves;  // microseconds

  double Evaluate(const std::array<uint8_t, kNumFeatures>& bins) const;
  int Depth() const;
};

struct GbdtParams {
  int n_trees = 300;
  double learning_rate = 0.1;
  int max_depth = 6;
  int min_samples_leaf = 4;
  int max_bins = 256;
  uint64_t seed = 0;
  // Row fraction per tree; 1 disables subsampling and the seed is unused.
  double subsample = 1.0;
};

struct GbdtModel {
  std::string op_tag;
  std::string dtype = "bf16";
  GbdtParams params;
  BinMapper bin_mapper;
  double base_score_us = 0.0;
  std::vector<Tree> trees;
};

struct ElementwiseSample {
  std::string op_tag;
  std::vector<int64_t> shape;
  double latency_s = 0.0;  // median of repeated runs
};

struct TrainOptions {
  // Worker threads for histogram construction; the model does not depend on
  // this value.
  int threads = 1;
  // When set, receives the training MSE (us^2) before the first tree and
  // after each tree.
  std::vector<double>* mse_history = nullptr;
};

inline constexpr size_t kMinTrainingSamples = 50;

// Squared-error boosting on microsecond targets. Throws InsufficientDataError
// below 50 samples and Error when samples mix op tags. A constant target
// yields a model with zero trees.
GbdtModel Train(const std::vector<ElementwiseSample>& samples,
                const GbdtParams& params, const TrainOptions& options = {});

// Seconds; never negative.
double PredictLatency(const GbdtModel& model, std::span<const int64_t> shape);

struct ElementwiseEvaluation {
  double r2 = 0.0;
  double median_abs_error_s = 0.0;
  double median_rel_error = 0.0;  // fraction, not percent
  double max_rel_error = 0.0;
  int n = 0;
};

ElementwiseEvaluation EvaluateModel(
    const GbdtModel& model, const std::vector<ElementwiseSample>& holdout);

inline constexpr int kModelSchemaVersion = 1;

std::string ModelToJson(const GbdtModel& model);
// Throws FormatError on schema mismatch or a malformed/truncated document.
GbdtModel ModelFromJson(std::string_view text);

void SaveModel(const GbdtModel& model, const std::string& path);
GbdtModel LoadModel(const std::string& path);

// Training CSV: header "op,shape,latency_us", shape like "128x256".
std::vector<ElementwiseSample> ReadElementwiseSamples(std::istream& in);
void WriteElementwiseSamples(std::ostream& out,
                             const std::vector<ElementwiseSample>& samples);

}  // namespace sle

#endif  // SLE_GBDT_H_
