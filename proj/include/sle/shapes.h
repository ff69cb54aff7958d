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

#ifndef SLE_SHAPES_H_
#define SLE_SHAPES_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace sle {

// C = A * B with A: M x K and B: K x N.
struct GemmShape {
  int64_t m = 1;
  int64_t k = 1;
  int64_t n = 1;

  int64_t macs() const { return m * k * n; }
  int64_t max_dim() const;

  friend bool operator==(const GemmShape&, const GemmShape&) = default;
};

// NHWC input, HWIO filter, unpadded, undilated.
struct ConvShape {
  int64_t ifmap_h = 1;
  int64_t ifmap_w = 1;
  int64_t channels = 1;
  int64_t filter_h = 1;
  int64_t filter_w = 1;
  int64_t num_filters = 1;
  int64_t stride_h = 1;
  int64_t stride_w = 1;
  int64_t batch = 1;

  int64_t out_h() const { return (ifmap_h - filter_h) / stride_h + 1; }
  int64_t out_w() const { return (ifmap_w - filter_w) / stride_w + 1; }

  // Throws ShapeMismatchError when an invariant is violated.
  void Validate() const;

  friend bool operator==(const ConvShape&, const ConvShape&) = default;
};

enum class Dataflow { kOutputStationary, kWeightStationary };

std::string_view DataflowName(Dataflow dataflow);  // "os" / "ws"
Dataflow ParseDataflow(std::string_view name);

struct ArrayConfig {
  int64_t rows = 128;
  int64_t cols = 128;
  Dataflow dataflow = Dataflow::kOutputStationary;

  std::string ToString() const;  // "128x128"
};

// Parses "RxC", e.g. "128x128".
ArrayConfig ParseArrayGeometry(std::string_view text);

}  // namespace sle

#endif  // SLE_SHAPES_H_
