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

#ifndef SLE_CLASSIFY_H_
#define SLE_CLASSIFY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "sle/shapes.h"
#include "sle/stablehlo_parser.h"
#include "sle/tensor_type.h"

namespace sle {

struct GemmOp {
  GemmShape shape;
  int64_t batch_count = 1;  // independent GEMMs from dot_general batch dims
};

struct ConvOp {
  ConvShape shape;
};

struct ElementwiseOp {
  std::string tag;  // add | subtract | multiply | maximum | minimum
  TensorType type;  // result type; the model key
};

struct UnsupportedOp {
  std::string reason;
};

using OpClass = std::variant<GemmOp, ConvOp, ElementwiseOp, UnsupportedOp>;

struct ClassifiedOp {
  OpInfo info;
  OpClass cls;

  std::string_view ClassName() const;  // gemm | conv | elementwise | unsupported
  bool supported() const { return !std::holds_alternative<UnsupportedOp>(cls); }
};

bool IsElementwiseKind(std::string_view op_kind);

// One-line JSON record with source_line, op_kind, class, operands and result
// as {dims, dtype}, attributes, then the costing view (gemm, conv,
// elementwise) or the reason the op is unsupported.
std::string ClassifiedOpToJson(const ClassifiedOp& op);

// Never throws; anything that cannot be costed becomes UnsupportedOp.
ClassifiedOp Classify(const OpInfo& info);

// K = product of contracting dims, M / N = products of the lhs / rhs free
// dims, batch_count = product of batch dims. Throws ShapeMismatchError when
// paired sizes disagree or the result type is inconsistent, Error when the
// dimension numbers are missing or out of range.
GemmOp DotToGemm(const OpInfo& info);

// Requires [b,0,1,f]x[0,1,i,o]->[b,0,1,f]. Throws UnsupportedLayoutError for
// any other layout and ShapeMismatchError when the recomputed output spatial
// dims disagree with the result type.
ConvShape ConvToShape(const OpInfo& info);

}  // namespace sle

#endif  // SLE_CLASSIFY_H_
