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

#ifndef SLE_SYSTOLIC_ORACLE_H_
#define SLE_SYSTOLIC_ORACLE_H_

#include <cstdint>

#include "sle/shapes.h"

namespace sle {

inline constexpr int64_t kOracleMaxArrayDim = 32;
inline constexpr int64_t kOracleMaxGemmDim = 64;

// Register-level, cycle-by-cycle simulation of a systolic array running one
// GEMM on integer operands. Used to check GemmCycles; it also checks that the
// array computed the right product and throws std::logic_error if not.
//
// Output stationary: row i of A enters from the left i cycles late, column j
// of B from the top j cycles late, operands hop one PE per cycle, and a PE
// accumulates whenever both operands are present. After the last MAC of a
// fold the accumulators shift out one row per cycle (r cycles).
//
// Weight stationary: the r x c weight block shifts in from the top over r
// cycles. Input vectors then enter the left edge one per cycle and hop one
// column per cycle; each column reduces its products in the cycle they are
// formed, so the last output leaves c - 1 cycles after the last input enters.
//
// A fold spans first injection to last result, inclusive. Folds run back to
// back. Throws GuardError when rows/cols > 32 or M/K/N > 64.
int64_t OracleSimulate(const GemmShape& shape, const ArrayConfig& cfg);

}  // namespace sle

#endif  // SLE_SYSTOLIC_ORACLE_H_
