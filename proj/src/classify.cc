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

#include "sle/classify.h"

#include <algorithm>
#include <array>
#include <set>

#include "json.hpp"
#include "sle/errors.h"

namespace sle {
namespace {

constexpr std::string_view kNhwcLayout = "[b,0,1,f]x[0,1,i,o]->[b,0,1,f]";

constexpr std::array<std::string_view, 5> kElementwiseKinds = {
    "add", "subtract", "multiply", "maximum", "minimum"};

std::string DimsToString(const std::vector<int64_t>& dims) {
  std::string out = "[";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(dims[i]);
  }
  return out + "]";
}

std::vector<int64_t> IntListOr(const OpInfo& info, const std::string& key,
                               std::vector<int64_t> fallback) {
  const auto* v = info.IntListAttr(key);
  return v ? *v : fallback;
}

void CheckAxes(const std::vector<int64_t>& axes, int rank,
               std::set<int64_t>& used, const char* side) {
  for (int64_t a : axes) {
    if (a < 0 || a >= rank) {
      throw Error(std::string(side) + " dimension index " + std::to_string(a) +
                  " out of range for rank " + std::to_string(rank));
    }
    if (!used.insert(a).second) {
      throw Error(std::string(side) + " dimension " + std::to_string(a) +
                  " used twice");
    }
  }
}

UnsupportedOp Unsupported(std::string reason) {
  return UnsupportedOp{std::move(reason)};
}

OpClass ClassifyDot(const OpInfo& info) {
  const auto* lhs_c = info.IntListAttr("lhs_contracting_dimensions");
  const auto* rhs_c = info.IntListAttr("rhs_contracting_dimensions");
  if (lhs_c == nullptr || rhs_c == nullptr) {
    return Unsupported("dot_general without contracting dimensions");
  }
  if (lhs_c->size() != 1 || rhs_c->size() != 1) {
    return Unsupported("dot_general needs exactly one contracting dimension "
                       "per side");
  }
  try {
    return DotToGemm(info);
  } catch (const Error& e) {
    return Unsupported(std::string("dot_general: ") + e.what());
  }
}

OpClass ClassifyConv(const OpInfo& info) {
  const auto strides = IntListOr(info, "window_strides", {1, 1});
  const auto padding = IntListOr(info, "padding", {});
  const auto lhs_dil = IntListOr(info, "lhs_dilation", {1, 1});
  const auto rhs_dil = IntListOr(info, "rhs_dilation", {1, 1});
  const auto fgc = IntListOr(info, "feature_group_count", {1});
  const auto bgc = IntListOr(info, "batch_group_count", {1});
  if (strides.size() != 2) {
    return Unsupported("convolution needs a 2-D spatial window");
  }
  if (std::any_of(padding.begin(), padding.end(),
                  [](int64_t p) { return p != 0; })) {
    return Unsupported("padded convolution not modeled");
  }
  auto all_one = [](const std::vector<int64_t>& v) {
    return std::all_of(v.begin(), v.end(), [](int64_t x) { return x == 1; });
  };
  if (!all_one(lhs_dil) || !all_one(rhs_dil)) {
    return Unsupported("dilated convolution not modeled");
  }
  if (!all_one(fgc) || !all_one(bgc)) {
    return Unsupported("grouped convolution not modeled");
  }
  try {
    return ConvOp{ConvToShape(info)};
  } catch (const Error& e) {
    return Unsupported(std::string("convolution: ") + e.what());
  }
}

OpClass ClassifyElementwise(const OpInfo& info) {
  if (info.operands.size() != 2) {
    return Unsupported(info.op_kind + " expects two operands");
  }
  const auto& lhs = info.operands[0];
  const auto& rhs = info.operands[1];
  if (lhs.dims != info.result.dims) {
    return Unsupported("broadcasting elementwise operands not modeled");
  }
  if (rhs.dims != info.result.dims && rhs.rank() != 0) {
    return Unsupported("broadcasting elementwise operands not modeled");
  }
  return ElementwiseOp{info.op_kind, info.result};
}

}  // namespace

std::string_view ClassifiedOp::ClassName() const {
  switch (cls.index()) {
    case 0:
      return "gemm";
    case 1:
      return "conv";
    case 2:
      return "elementwise";
    default:
      return "unsupported";
  }
}

bool IsElementwiseKind(std::string_view op_kind) {
  return std::find(kElementwiseKinds.begin(), kElementwiseKinds.end(),
                   op_kind) != kElementwiseKinds.end();
}

ClassifiedOp Classify(const OpInfo& info) {
  ClassifiedOp out{info, UnsupportedOp{}};
  if (info.op_kind == "dot_general") {
    out.cls = ClassifyDot(info);
  } else if (info.op_kind == "convolution") {
    out.cls = ClassifyConv(info);
  } else if (IsElementwiseKind(info.op_kind)) {
    out.cls = ClassifyElementwise(info);
  } else if (info.op_kind == "reduce" || info.op_kind == "reduce_window") {
    out.cls = Unsupported("reduction not modeled");
  } else {
    out.cls = Unsupported("operation '" + info.op_kind + "' not modeled");
  }
  return out;
}

GemmOp DotToGemm(const OpInfo& info) {
  if (info.operands.size() != 2) {
    throw Error("dot_general expects two operands");
  }
  const auto& lhs = info.operands[0].dims;
  const auto& rhs = info.operands[1].dims;
  const auto* lhs_c = info.IntListAttr("lhs_contracting_dimensions");
  const auto* rhs_c = info.IntListAttr("rhs_contracting_dimensions");
  if (lhs_c == nullptr || rhs_c == nullptr) {
    throw Error("missing contracting dimensions");
  }
  const auto lhs_b = IntListOr(info, "lhs_batching_dimensions", {});
  const auto rhs_b = IntListOr(info, "rhs_batching_dimensions", {});
  if (lhs_c->size() != rhs_c->size() || lhs_b.size() != rhs_b.size()) {
    throw ShapeMismatchError("lhs and rhs dimension-number lists differ in "
                             "length");
  }

  std::set<int64_t> lhs_used, rhs_used;
  CheckAxes(lhs_b, static_cast<int>(lhs.size()), lhs_used, "lhs");
  CheckAxes(*lhs_c, static_cast<int>(lhs.size()), lhs_used, "lhs");
  CheckAxes(rhs_b, static_cast<int>(rhs.size()), rhs_used, "rhs");
  CheckAxes(*rhs_c, static_cast<int>(rhs.size()), rhs_used, "rhs");

  GemmOp out;
  std::vector<int64_t> expected_result;
  for (size_t i = 0; i < lhs_b.size(); ++i) {
    const int64_t a = lhs[lhs_b[i]];
    const int64_t b = rhs[rhs_b[i]];
    if (a != b) {
      throw ShapeMismatchError("batch sizes differ: " + std::to_string(a) +
                               " vs " + std::to_string(b));
    }
    out.batch_count *= a;
    expected_result.push_back(a);
  }
  out.shape.k = 1;
  for (size_t i = 0; i < lhs_c->size(); ++i) {
    const int64_t a = lhs[(*lhs_c)[i]];
    const int64_t b = rhs[(*rhs_c)[i]];
    if (a != b) {
      throw ShapeMismatchError("contracting sizes differ: " +
                               std::to_string(a) + " vs " + std::to_string(b));
    }
    out.shape.k *= a;
  }
  out.shape.m = 1;
  for (size_t d = 0; d < lhs.size(); ++d) {
    if (lhs_used.count(static_cast<int64_t>(d))) continue;
    out.shape.m *= lhs[d];
    expected_result.push_back(lhs[d]);
  }
  out.shape.n = 1;
  for (size_t d = 0; d < rhs.size(); ++d) {
    if (rhs_used.count(static_cast<int64_t>(d))) continue;
    out.shape.n *= rhs[d];
    expected_result.push_back(rhs[d]);
  }
  if (expected_result != info.result.dims) {
    throw ShapeMismatchError("result type " + DimsToString(info.result.dims) +
                             " disagrees with inferred " +
                             DimsToString(expected_result));
  }
  return out;
}

ConvShape ConvToShape(const OpInfo& info) {
  const std::string* layout = info.StringAttr("dimension_numbers");
  if (layout == nullptr) {
    throw UnsupportedLayoutError("missing convolution dimension numbers");
  }
  if (*layout != kNhwcLayout) {
    throw UnsupportedLayoutError("unsupported layout " + *layout +
                                 " (want NHWC input, HWIO filter)");
  }
  if (info.operands.size() != 2 || info.operands[0].rank() != 4 ||
      info.operands[1].rank() != 4 || info.result.rank() != 4) {
    throw ShapeMismatchError("convolution expects rank-4 input, filter and "
                             "result");
  }
  const auto& in = info.operands[0].dims;
  const auto& w = info.operands[1].dims;
  const auto& out = info.result.dims;
  const auto strides = IntListOr(info, "window_strides", {1, 1});
  if (strides.size() != 2) {
    throw ShapeMismatchError("expected two window strides");
  }
  if (w[2] != in[3]) {
    throw ShapeMismatchError("filter input channels " + std::to_string(w[2]) +
                             " != input channels " + std::to_string(in[3]));
  }

  ConvShape shape{.ifmap_h = in[1],
                  .ifmap_w = in[2],
                  .channels = in[3],
                  .filter_h = w[0],
                  .filter_w = w[1],
                  .num_filters = w[3],
                  .stride_h = strides[0],
                  .stride_w = strides[1],
                  .batch = in[0]};
  shape.Validate();
  const std::vector<int64_t> recomputed = {shape.batch, shape.out_h(),
                                           shape.out_w(), shape.num_filters};
  if (recomputed != out) {
    throw ShapeMismatchError("result type " + DimsToString(out) +
                             " disagrees with recomputed " +
                             DimsToString(recomputed));
  }
  return shape;
}

std::string ClassifiedOpToJson(const ClassifiedOp& op) {
  using J = nlohmann::ordered_json;
  J j;
  auto type_json = [](const TensorType& t) {
    return J{{"dims", t.dims}, {"dtype", DTypeName(t.dtype)}};
  };
  j["source_line"] = op.info.source_line;
  j["op_kind"] = op.info.op_kind;
  j["class"] = op.ClassName();
  J& operands = j["operands"] = J::array();
  for (const TensorType& t : op.info.operands) operands.push_back(type_json(t));
  j["result"] = type_json(op.info.result);
  J& attrs = j["attributes"] = J::object();
  for (const auto& [key, value] : op.info.attributes) {
    std::visit([&](const auto& v) { attrs[key] = v; }, value);
  }
  if (const auto* g = std::get_if<GemmOp>(&op.cls)) {
    j["gemm"] = {{"m", g->shape.m},
                 {"k", g->shape.k},
                 {"n", g->shape.n},
                 {"batch_count", g->batch_count}};
  } else if (const auto* c = std::get_if<ConvOp>(&op.cls)) {
    const ConvShape& s = c->shape;
    j["conv"] = {{"batch", s.batch},         {"ifmap_h", s.ifmap_h},
                 {"ifmap_w", s.ifmap_w},     {"channels", s.channels},
                 {"filter_h", s.filter_h},   {"filter_w", s.filter_w},
                 {"num_filters", s.num_filters}, {"stride_h", s.stride_h},
                 {"stride_w", s.stride_w}};
  } else if (const auto* e = std::get_if<ElementwiseOp>(&op.cls)) {
    j["elementwise"] = {{"tag", e->tag}, {"shape", e->type.dims}};
  } else {
    j["reason"] = std::get<UnsupportedOp>(op.cls).reason;
  }
  return j.dump();
}

}  // namespace sle
