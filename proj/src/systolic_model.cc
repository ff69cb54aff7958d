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

#include <algorithm>
#include <charconv>
#include <string>

#include "sle/errors.h"

namespace sle {

int64_t GemmShape::max_dim() const { return std::max({m, k, n}); }

void ConvShape::Validate() const {
  const bool positive = ifmap_h >= 1 && ifmap_w >= 1 && channels >= 1 &&
                        filter_h >= 1 && filter_w >= 1 && num_filters >= 1 &&
                        stride_h >= 1 && stride_w >= 1 && batch >= 1;
  if (!positive) {
    throw ShapeMismatchError("convolution parameters must be positive");
  }
  if (filter_h > ifmap_h || filter_w > ifmap_w) {
    throw ShapeMismatchError("filter larger than input feature map");
  }
}

std::string_view DataflowName(Dataflow dataflow) {
  return dataflow == Dataflow::kOutputStationary ? "os" : "ws";
}

Dataflow ParseDataflow(std::string_view name) {
  if (name == "os") return Dataflow::kOutputStationary;
  if (name == "ws") return Dataflow::kWeightStationary;
  throw Error("unknown dataflow '" + std::string(name) + "' (want os|ws)");
}

std::string ArrayConfig::ToString() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

ArrayConfig ParseArrayGeometry(std::string_view text) {
  const size_t x = text.find('x');
  ArrayConfig cfg;
  auto parse = [&](std::string_view part, int64_t& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(),
                                     out);
    return ec == std::errc() && ptr == part.data() + part.size() && out >= 1;
  };
  if (x == std::string_view::npos || !parse(text.substr(0, x), cfg.rows) ||
      !parse(text.substr(x + 1), cfg.cols)) {
    throw Error("bad array geometry '" + std::string(text) +
                "' (want RxC, e.g. 128x128)");
  }
  return cfg;
}

CycleEstimate GemmCycles(const GemmShape& shape, const ArrayConfig& cfg) {
  const bool os = cfg.dataflow == Dataflow::kOutputStationary;
  // Spatial extents mapped on (rows, cols) and the streamed extent.
  const int64_t row_extent = os ? shape.m : shape.k;
  const int64_t col_extent = shape.n;
  const int64_t temporal = os ? shape.k : shape.m;

  const int64_t full_row_folds = row_extent / cfg.rows;
  const int64_t row_rem = row_extent % cfg.rows;
  const int64_t full_col_folds = col_extent / cfg.cols;
  const int64_t col_rem = col_extent % cfg.cols;

  auto fold_cycles = [&](int64_t r, int64_t c) -> int64_t {
    return os ? 2 * r + c + temporal - 2 : r + c + temporal - 1;
  };

  // Folds come in at most four occupancy classes; sum them in closed form.
  CycleEstimate est;
  est.gemm = shape;
  const int64_t row_classes[2][2] = {{cfg.rows, full_row_folds},
                                     {row_rem, row_rem > 0 ? 1 : 0}};
  const int64_t col_classes[2][2] = {{cfg.cols, full_col_folds},
                                     {col_rem, col_rem > 0 ? 1 : 0}};
  for (const auto& [r, row_count] : row_classes) {
    for (const auto& [c, col_count] : col_classes) {
      const int64_t count = row_count * col_count;
      if (count == 0) continue;
      est.total_cycles += count * fold_cycles(r, c);
      est.tiles += count;
    }
  }
  est.utilization =
      static_cast<double>(shape.macs()) /
      (static_cast<double>(est.total_cycles) * static_cast<double>(cfg.rows) *
       static_cast<double>(cfg.cols));
  return est;
}

GemmShape Im2ColGemm(const ConvShape& shape) {
  shape.Validate();
  return GemmShape{.m = shape.out_h() * shape.out_w() * shape.batch,
                   .k = shape.filter_h * shape.filter_w * shape.channels,
                   .n = shape.num_filters};
}

CycleEstimate ConvCycles(const ConvShape& shape, const ArrayConfig& cfg) {
  return GemmCycles(Im2ColGemm(shape), cfg);
}

}  // namespace sle
