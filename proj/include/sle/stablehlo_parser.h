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

#ifndef SLE_STABLEHLO_PARSER_H_
#define SLE_STABLEHLO_PARSER_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sle/tensor_type.h"

namespace sle {

using AttrValue = std::variant<std::string, std::vector<int64_t>>;

// One operation lifted out of a StableHLO module.
//
// Recognized attributes:
//   dot_general: lhs_batching_dimensions, rhs_batching_dimensions,
//                lhs_contracting_dimensions, rhs_contracting_dimensions
//   convolution: dimension_numbers (string, spaces removed, e.g.
//                "[b,0,1,f]x[0,1,i,o]->[b,0,1,f]"), window_strides, padding
//                (flattened low/high pairs), lhs_dilation, rhs_dilation,
//                feature_group_count, batch_group_count
//   any op with more than one tensor result: result_count
struct OpInfo {
  std::string op_kind;  // "dot_general"; non-stablehlo ops keep the dialect
  std::vector<TensorType> operands;
  TensorType result;
  std::map<std::string, AttrValue> attributes;
  int source_line = 0;

  const std::vector<int64_t>* IntListAttr(const std::string& key) const;
  const std::string* StringAttr(const std::string& key) const;
};

// Parses StableHLO text (pretty or generic op syntax) into OpInfo records in
// source order. Ops nested in another op's region (reduce bodies, while
// conditions, ...) are not reported; the owning op is. Statements without a
// tensor-typed result are skipped.
//
// Throws SyntaxError (line/column in `text`) for unbalanced delimiters or
// malformed tensor types and UnsupportedDtypeError for unknown element types.
std::vector<OpInfo> ParseModule(std::string_view text);

}  // namespace sle

#endif  // SLE_STABLEHLO_PARSER_H_
