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

#ifndef SLE_WORKLOAD_H_
#define SLE_WORKLOAD_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sle/calibration.h"
#include "sle/gbdt.h"
#include "sle/shapes.h"

namespace sle {

using Shape = std::vector<int64_t>;

enum class SweepMode {
  kProduct,  // every (M, K, N) triple on the regime grid
  kAxis,     // one dim varies, the other two sit at the grid midpoint
};

std::string_view SweepModeName(SweepMode mode);  // product | axis
SweepMode ParseSweepMode(std::string_view name);  // throws Error

// Inclusive arithmetic grid lo, lo + step, ..., hi.
struct RegimeGrid {
  int64_t lo = 0;
  int64_t hi = 0;
  int64_t step = 0;
};

// Small 32..128 step 16, Medium 128..1024 step 128, Large 1024..4096
// step 512.
RegimeGrid DefaultGrid(Regime regime);

struct SweepSpec {
  Regime regime = Regime::kSmall;
  SweepMode mode = SweepMode::kProduct;
  int64_t step = 0;  // 0 selects the regime default
};

// Grid values are lo + i * step for lo + i * step <= hi. The axis-mode
// midpoint is lo + round(n_steps / 2) * step with halves rounded up.
std::vector<GemmShape> GemmSweep(const SweepSpec& spec);

struct ElementwiseSweeps {
  std::vector<Shape> sweep_1d;  // [32], [64], ..., [8192]
  std::vector<Shape> sweep_2d;  // [a, b] with a, b in 64..1024 step 64
};

ElementwiseSweeps ElementwiseManualSweeps();

struct ShapeDatasetSpec {
  int64_t max_elements = int64_t{1} << 24;
  int samples = 1000;
  int factorizations_per_size = 3;
  bool include_pow2_boundary = true;
  uint64_t seed = 0;
};

// Sizes are drawn log-uniformly on [32, max_elements] and rounded to an
// integer. Each size gets up to `factorizations_per_size` distinct shapes:
// a rank is drawn from 1..4, then each leading dim is a uniformly chosen
// divisor of what remains. Throws Error when max_elements < 32 or
// samples < 0.
std::vector<Shape> ShapeDataset(const ShapeDatasetSpec& spec);

// Dims {2^n - 1, 2^n, 2^n + 1} for n in 5..12 as 1-D shapes, followed by
// every ordered pair of them whose product is at most max_elements.
std::vector<Shape> Pow2BoundaryShapes(int64_t max_elements);

struct RegimeLine {
  double alpha_s_per_cycle = 0.0;
  double beta_s = 0.0;
};

struct GemmGroundTruth {
  std::map<Regime, RegimeLine> lines;
  ArrayConfig array;
};

// Small 1.0 ns/cycle + 0.5 us, Medium 0.8 ns/cycle + 1.5 us, Large
// 0.75 ns/cycle + 4 us, on a 128x128 output-stationary array.
GemmGroundTruth DefaultGemmGroundTruth();

// latency = (alpha * cycles + beta) * (1 + noise_pct / 100 * z) with z
// standard normal, redrawn until the latency is positive.
std::vector<MeasurementRecord> SynthGemmMeasurements(
    const std::vector<GemmShape>& shapes, const GemmGroundTruth& truth,
    double noise_pct, uint64_t seed);

// 0.8 us + 0.002 us * elements / 1000 + 0.3 us when the leading dim is a
// multiple of 256.
double ElementwiseLawSeconds(const Shape& shape);

std::vector<ElementwiseSample> SynthElementwiseMeasurements(
    std::string_view op_tag, const std::vector<Shape>& shapes,
    double noise_pct, uint64_t seed);

}  // namespace sle

#endif  // SLE_WORKLOAD_H_
