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

#ifndef SLE_TENSOR_TYPE_H_
#define SLE_TENSOR_TYPE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sle {

enum class DType { kBF16, kF16, kF32, kF64, kI1, kI8, kI16, kI32, kI64 };

std::string_view DTypeName(DType dtype);
std::optional<DType> DTypeFromName(std::string_view name);

// A statically shaped ranked tensor. Rank 0 is dims = {}.
struct TensorType {
  std::vector<int64_t> dims;
  DType dtype = DType::kF32;

  int rank() const { return static_cast<int>(dims.size()); }
  int64_t num_elements() const;
  std::string ToString() const;  // "tensor<128x256xbf16>"

  friend bool operator==(const TensorType&, const TensorType&) = default;
};

// Parses "tensor<DxDx...xdtype>". Errors carry line 1 and a column that is
// the 1-based offset of the offending character inside `text`.
TensorType ParseTensorType(std::string_view text);

}  // namespace sle

#endif  // SLE_TENSOR_TYPE_H_
