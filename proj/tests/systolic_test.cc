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

#include "sle/systolic_model.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "sle/errors.h"
#include "sle/random.h"
#include "sle/systolic_oracle.h"

namespace sle {
namespace {

ArrayConfig Array(int64_t r, int64_t c, Dataflow flow) {
  ArrayConfig cfg;
  cfg.rows = r;
  cfg.cols = c;
  cfg.dataflow = flow;
  return cfg;
}

constexpr Dataflow kOS = Dataflow::kOutputStationary;
constexpr Dataflow kWS = Dataflow::kWeightStationary;

// Visits every fold one at a time and adds its cost.
int64_t FoldByFold(const GemmShape& s, const ArrayConfig& cfg) {
  const bool os = cfg.dataflow == kOS;
  const int64_t rows_dim = os ? s.m : s.k;
  const int64_t t = os ? s.k : s.m;
  int64_t total = 0;
  for (int64_t r0 = 0; r0 < rows_dim; r0 += cfg.rows) {
    for (int64_t c0 = 0; c0 < s.n; c0 += cfg.cols) {
      const int64_t r = std::min(cfg.rows, rows_dim - r0);
      const int64_t c = std::min(cfg.cols, s.n - c0);
      total += os ? 2 * r + c + t - 2 : r + c + t - 1;
    }
  }
  return total;
}

TEST(GemmCyclesTest, FourCubedOnFourByFour) {
  const CycleEstimate e = GemmCycles({4, 4, 4}, Array(4, 4, kOS));
  EXPECT_EQ(e.total_cycles, 14);
  EXPECT_EQ(e.tiles, 1);
}

TEST(GemmCyclesTest, SingleMac) {
  EXPECT_EQ(GemmCycles({1, 1, 1}, Array(1, 1, kOS)).total_cycles, 2);
}

TEST(GemmCyclesTest, FourFoldsOnDefaultArray) {
  const CycleEstimate e = GemmCycles({256, 128, 256}, ArrayConfig{});
  EXPECT_EQ(e.tiles, 4);
  EXPECT_EQ(e.total_cycles, 2040);
  EXPECT_DOUBLE_EQ(e.utilization,
                   256.0 * 128 * 256 / (2040.0 * 128 * 128));
}

TEST(GemmCyclesTest, ClosedFormMatchesFoldLoop) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const GemmShape s{1 + static_cast<int64_t>(rng.Below(3000)),
                      1 + static_cast<int64_t>(rng.Below(3000)),
                      1 + static_cast<int64_t>(rng.Below(3000))};
    const ArrayConfig cfg = Array(1 + rng.Below(200), 1 + rng.Below(200),
                                  rng.Below(2) ? kOS : kWS);
    EXPECT_EQ(GemmCycles(s, cfg).total_cycles, FoldByFold(s, cfg));
  }
}

TEST(OracleTest, Examples) {
  EXPECT_EQ(OracleSimulate({1, 1, 1}, Array(1, 1, kOS)), 2);
  EXPECT_EQ(OracleSimulate({4, 4, 4}, Array(4, 4, kOS)), 14);
  EXPECT_EQ(OracleSimulate({8, 4, 4}, Array(4, 4, kOS)), 28);
}

TEST(OracleTest, ReducedScaleFoldOfTheDefaultArrayExample) {
  // Same occupancy ratios as 256x128x256 on 128x128, scaled down 16x.
  const ArrayConfig cfg = Array(8, 8, kOS);
  EXPECT_EQ(OracleSimulate({16, 8, 16}, cfg),
            GemmCycles({16, 8, 16}, cfg).total_cycles);
  EXPECT_EQ(OracleSimulate({16, 8, 16}, cfg), 4 * (2 * 8 + 8 + 8 - 2));
}

TEST(OracleTest, GuardLimits) {
  EXPECT_THROW(OracleSimulate({4, 4, 4}, Array(33, 4, kOS)), GuardError);
  EXPECT_THROW(OracleSimulate({65, 4, 4}, Array(4, 4, kWS)), GuardError);
  EXPECT_NO_THROW(OracleSimulate({64, 64, 64}, Array(32, 32, kWS)));
}

TEST(OracleTest, AgreesWithFormulaOnRectangularArrays) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const GemmShape s{1 + static_cast<int64_t>(rng.Below(40)),
                      1 + static_cast<int64_t>(rng.Below(40)),
                      1 + static_cast<int64_t>(rng.Below(40))};
    const ArrayConfig cfg = Array(1 + rng.Below(12), 1 + rng.Below(12),
                                  rng.Below(2) ? kOS : kWS);
    EXPECT_EQ(OracleSimulate(s, cfg), GemmCycles(s, cfg).total_cycles);
  }
}

TEST(GemmCyclesPropertyTest, MonotoneInEachDim) {
  for (Dataflow flow : {kOS, kWS}) {
    const ArrayConfig cfg = Array(8, 4, flow);
    for (int64_t m = 1; m <= 20; ++m) {
      for (int64_t k = 1; k <= 20; ++k) {
        for (int64_t n = 1; n <= 20; ++n) {
          const int64_t base = GemmCycles({m, k, n}, cfg).total_cycles;
          EXPECT_LE(base, GemmCycles({m + 1, k, n}, cfg).total_cycles);
          EXPECT_LE(base, GemmCycles({m, k + 1, n}, cfg).total_cycles);
          EXPECT_LE(base, GemmCycles({m, k, n + 1}, cfg).total_cycles);
        }
      }
    }
  }
}

TEST(GemmCyclesPropertyTest, UtilizationIsAFraction) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const GemmShape s{1 + static_cast<int64_t>(rng.Below(5000)),
                      1 + static_cast<int64_t>(rng.Below(5000)),
                      1 + static_cast<int64_t>(rng.Below(5000))};
    const ArrayConfig cfg = Array(1 + rng.Below(256), 1 + rng.Below(256),
                                  rng.Below(2) ? kOS : kWS);
    const CycleEstimate e = GemmCycles(s, cfg);
    EXPECT_GT(e.utilization, 0.0);
    EXPECT_LE(e.utilization, 1.0);
    EXPECT_GE(e.tiles, 1);
  }
}

TEST(GemmCyclesPropertyTest, LongContractionAmortizesFill) {
  EXPECT_GE(GemmCycles({8, 4096, 8}, Array(8, 8, kOS)).utilization, 0.95);
}

TEST(ConvCyclesTest, Im2ColExamples) {
  EXPECT_EQ(Im2ColGemm({4, 4, 1, 4, 4, 1, 1, 1, 1}), (GemmShape{1, 16, 1}));
  EXPECT_EQ(Im2ColGemm({56, 56, 64, 3, 3, 128, 1, 1, 1}),
            (GemmShape{2916, 576, 128}));
  EXPECT_EQ(Im2ColGemm({5, 5, 1, 3, 3, 1, 5, 5, 1}).m, 1);
}

TEST(ConvCyclesTest, EqualsGemmCyclesOfTheLoweredShape) {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    ConvShape s;
    s.ifmap_h = 1 + rng.Below(64);
    s.ifmap_w = 1 + rng.Below(64);
    s.filter_h = 1 + rng.Below(s.ifmap_h);
    s.filter_w = 1 + rng.Below(s.ifmap_w);
    s.channels = 1 + rng.Below(64);
    s.num_filters = 1 + rng.Below(64);
    s.stride_h = 1 + rng.Below(4);
    s.stride_w = 1 + rng.Below(4);
    s.batch = 1 + rng.Below(4);
    const ArrayConfig cfg = Array(1 + rng.Below(64), 1 + rng.Below(64),
                                  rng.Below(2) ? kOS : kWS);
    const CycleEstimate conv = ConvCycles(s, cfg);
    const CycleEstimate gemm = GemmCycles(Im2ColGemm(s), cfg);
    EXPECT_EQ(conv.total_cycles, gemm.total_cycles);
    EXPECT_EQ(conv.gemm, Im2ColGemm(s));
  }
}

TEST(ConvCyclesTest, InvalidShapeThrows) {
  EXPECT_THROW(ConvCycles({4, 4, 1, 5, 3, 1, 1, 1, 1}, ArrayConfig{}),
               ShapeMismatchError);
  EXPECT_THROW(ConvCycles({4, 4, 1, 3, 3, 1, 0, 1, 1}, ArrayConfig{}),
               ShapeMismatchError);
}

TEST(ArrayConfigTest, ParsesGeometryAndDataflow) {
  const ArrayConfig cfg = ParseArrayGeometry("16x32");
  EXPECT_EQ(cfg.rows, 16);
  EXPECT_EQ(cfg.cols, 32);
  EXPECT_EQ(cfg.ToString(), "16x32");
  EXPECT_EQ(ParseDataflow("ws"), kWS);
  EXPECT_THROW(ParseArrayGeometry("0x4"), Error);
  EXPECT_THROW(ParseArrayGeometry("4by4"), Error);
  EXPECT_THROW(ParseDataflow("is"), Error);
}

}  // namespace
}  // namespace sle
