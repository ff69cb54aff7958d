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

#ifndef SLE_SYSTOLIC_MODEL_H_
#define SLE_SYSTOLIC_MODEL_H_

#include <cstdint>

#include "sle/shapes.h"

namespace sle {

struct CycleEstimate {
  int64_t total_cycles = 0;
  int64_t tiles = 0;
  // MACs performed / (total_cycles * rows * cols).
  double utilization = 0.0;
  // The GEMM that was costed; for convolutions this is the im2col GEMM.
  GemmShape gemm;
};

// Analytical fold-by-fold cycle count on an R x C array.
//
// Output stationary maps M onto rows and N onto columns and streams K:
// each fold with occupancy r x c costs 2r + c + K - 2 cycles (operand skew,
// K accumulations, then r cycles to shift results out).
//
// Weight stationary maps K onto rows and N onto columns and streams M:
// each fold costs r + c + M - 1 cycles (r preload, M input vectors, c - 1
// column skew to drain the last output).
//
// Folds never overlap; partial folds use their true occupancy.
CycleEstimate GemmCycles(const GemmShape& shape, const ArrayConfig& cfg);

// im2col lowering: M = out_h * out_w * batch, K = fh * fw * C, N = filters.
GemmShape Im2ColGemm(const ConvShape& shape);

CycleEstimate ConvCycles(const ConvShape& shape, const ArrayConfig& cfg);

}  // namespace sle

#endif  // SLE_SYSTOLIC_MODEL_H_
