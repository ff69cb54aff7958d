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

#include "sle/systolic_oracle.h"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sle/errors.h"

namespace sle {
namespace {

using Matrix = std::vector<std::vector<int64_t>>;

Matrix MakeOperand(int64_t rows, int64_t cols, int64_t salt) {
  Matrix m(rows, std::vector<int64_t>(cols));
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) {
      m[i][j] = (i * 7 + j * 3 + salt) % 11 - 5;
    }
  }
  return m;
}

using Slot = std::optional<int64_t>;
using Grid = std::vector<std::vector<Slot>>;

Grid EmptyGrid(int64_t r, int64_t c) {
  return Grid(r, std::vector<Slot>(c));
}

// One output-stationary fold: rows [m0, m0+r) of A, columns [n0, n0+c) of B.
int64_t RunOsFold(const Matrix& a, const Matrix& b, int64_t m0, int64_t n0,
                  int64_t r, int64_t c, int64_t depth, Matrix& out) {
  Grid a_reg = EmptyGrid(r, c);
  Grid b_reg = EmptyGrid(r, c);
  std::vector<std::vector<int64_t>> acc(r, std::vector<int64_t>(c, 0));
  std::vector<std::vector<int64_t>> done(r, std::vector<int64_t>(c, 0));
  int64_t pending = r * c;
  int64_t cycle = 0;
  int64_t last_mac = -1;

  while (pending > 0) {
    Grid a_next = EmptyGrid(r, c);
    Grid b_next = EmptyGrid(r, c);
    for (int64_t i = 0; i < r; ++i) {
      const int64_t k = cycle - i;
      if (k >= 0 && k < depth) a_next[i][0] = a[m0 + i][k];
      for (int64_t j = 1; j < c; ++j) a_next[i][j] = a_reg[i][j - 1];
    }
    for (int64_t j = 0; j < c; ++j) {
      const int64_t k = cycle - j;
      if (k >= 0 && k < depth) b_next[0][j] = b[k][n0 + j];
      for (int64_t i = 1; i < r; ++i) b_next[i][j] = b_reg[i - 1][j];
    }
    a_reg = std::move(a_next);
    b_reg = std::move(b_next);

    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = 0; j < c; ++j) {
        if (a_reg[i][j] && b_reg[i][j]) {
          acc[i][j] += *a_reg[i][j] * *b_reg[i][j];
          if (++done[i][j] == depth) --pending;
          last_mac = cycle;
        }
      }
    }
    ++cycle;
    if (cycle > 4 * (r + c + depth) + 16) {
      throw std::logic_error("output-stationary simulation did not converge");
    }
  }

  // Drain: the bottom row leaves every cycle and the rest shift down.
  int64_t drain_cycle = last_mac;
  int64_t rows_left = r;
  while (rows_left > 0) {
    ++drain_cycle;
    const int64_t leaving = rows_left - 1;  // bottom-most occupied row
    for (int64_t j = 0; j < c; ++j) {
      out[m0 + leaving][n0 + j] = acc[leaving][j];
    }
    --rows_left;
  }
  return drain_cycle + 1;  // first injection is cycle 0
}

// One weight-stationary fold: K rows [k0, k0+r), N columns [n0, n0+c).
int64_t RunWsFold(const Matrix& a, const Matrix& b, int64_t k0, int64_t n0,
                  int64_t r, int64_t c, int64_t num_vectors, Matrix& out) {
  Grid w_reg = EmptyGrid(r, c);
  int64_t cycle = 0;
  // Preload: weight row (r - 1 - t) enters row 0 at cycle t and shifts down.
  for (; cycle < r; ++cycle) {
    for (int64_t i = r - 1; i >= 1; --i) w_reg[i] = w_reg[i - 1];
    for (int64_t j = 0; j < c; ++j) w_reg[0][j] = b[k0 + (r - 1 - cycle)][n0 + j];
  }
  for (int64_t i = 0; i < r; ++i) {
    for (int64_t j = 0; j < c; ++j) {
      if (!w_reg[i][j] || *w_reg[i][j] != b[k0 + i][n0 + j]) {
        throw std::logic_error("weight preload misplaced a weight");
      }
    }
  }

  // x_reg[i][j] holds (vector index, value) for the input in PE(i, j).
  std::vector<std::vector<std::optional<std::pair<int64_t, int64_t>>>> x_reg(
      r, std::vector<std::optional<std::pair<int64_t, int64_t>>>(c));
  int64_t produced = 0;
  int64_t last_output = -1;
  const int64_t stream_start = cycle;
  while (produced < num_vectors * c) {
    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = c - 1; j >= 1; --j) x_reg[i][j] = x_reg[i][j - 1];
      const int64_t v = cycle - stream_start;
      if (v >= 0 && v < num_vectors) {
        x_reg[i][0] = std::make_pair(v, a[v][k0 + i]);
      } else {
        x_reg[i][0].reset();
      }
    }
    for (int64_t j = 0; j < c; ++j) {
      std::optional<int64_t> vector_index;
      int64_t column_sum = 0;
      for (int64_t i = 0; i < r; ++i) {
        if (!x_reg[i][j]) continue;
        if (vector_index && *vector_index != x_reg[i][j]->first) {
          throw std::logic_error("column holds inputs from two vectors");
        }
        vector_index = x_reg[i][j]->first;
        column_sum += x_reg[i][j]->second * *w_reg[i][j];
      }
      if (vector_index) {
        out[*vector_index][n0 + j] += column_sum;
        ++produced;
        last_output = cycle;
      }
    }
    ++cycle;
    if (cycle > 4 * (r + c + num_vectors) + 16) {
      throw std::logic_error("weight-stationary simulation did not converge");
    }
  }
  return last_output + 1;
}

}  // namespace

int64_t OracleSimulate(const GemmShape& shape, const ArrayConfig& cfg) {
  if (cfg.rows < 1 || cfg.cols < 1 || cfg.rows > kOracleMaxArrayDim ||
      cfg.cols > kOracleMaxArrayDim) {
    throw GuardError("oracle array must be within 1..32 per side, got " +
                     cfg.ToString());
  }
  if (shape.m < 1 || shape.k < 1 || shape.n < 1 ||
      shape.m > kOracleMaxGemmDim || shape.k > kOracleMaxGemmDim ||
      shape.n > kOracleMaxGemmDim) {
    throw GuardError("oracle GEMM dims must be within 1..64");
  }

  const Matrix a = MakeOperand(shape.m, shape.k, 1);
  const Matrix b = MakeOperand(shape.k, shape.n, 4);
  Matrix out(shape.m, std::vector<int64_t>(shape.n, 0));

  int64_t total = 0;
  if (cfg.dataflow == Dataflow::kOutputStationary) {
    for (int64_t m0 = 0; m0 < shape.m; m0 += cfg.rows) {
      for (int64_t n0 = 0; n0 < shape.n; n0 += cfg.cols) {
        total += RunOsFold(a, b, m0, n0, std::min(cfg.rows, shape.m - m0),
                           std::min(cfg.cols, shape.n - n0), shape.k, out);
      }
    }
  } else {
    for (int64_t k0 = 0; k0 < shape.k; k0 += cfg.rows) {
      for (int64_t n0 = 0; n0 < shape.n; n0 += cfg.cols) {
        total += RunWsFold(a, b, k0, n0, std::min(cfg.rows, shape.k - k0),
                           std::min(cfg.cols, shape.n - n0), shape.m, out);
      }
    }
  }

  for (int64_t i = 0; i < shape.m; ++i) {
    for (int64_t j = 0; j < shape.n; ++j) {
      int64_t expect = 0;
      for (int64_t k = 0; k < shape.k; ++k) expect += a[i][k] * b[k][j];
      if (out[i][j] != expect) {
        throw std::logic_error("systolic simulation produced a wrong product");
      }
    }
  }
  return total;
}

}  // namespace sle
