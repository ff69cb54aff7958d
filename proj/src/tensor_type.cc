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

#include "sle/tensor_type.h"

#include <array>
#include <cctype>
#include <charconv>
#include <utility>

#include "sle/errors.h"

namespace sle {
namespace {

constexpr std::array<std::pair<std::string_view, DType>, 9> kDTypeNames = {{
    {"bf16", DType::kBF16},
    {"f16", DType::kF16},
    {"f32", DType::kF32},
    {"f64", DType::kF64},
    {"i1", DType::kI1},
    {"i8", DType::kI8},
    {"i16", DType::kI16},
    {"i32", DType::kI32},
    {"i64", DType::kI64},
}};

[[noreturn]] void Fail(std::string_view what, size_t offset) {
  throw SyntaxError(std::string(what), 1, static_cast<int>(offset) + 1);
}

}  // namespace

std::string_view DTypeName(DType dtype) {
  for (const auto& [name, value] : kDTypeNames) {
    if (value == dtype) return name;
  }
  return "?";
}

std::optional<DType> DTypeFromName(std::string_view name) {
  for (const auto& [candidate, value] : kDTypeNames) {
    if (candidate == name) return value;
  }
  return std::nullopt;
}

int64_t TensorType::num_elements() const {
  int64_t n = 1;
  for (int64_t d : dims) n *= d;
  return n;
}

std::string TensorType::ToString() const {
  std::string out = "tensor<";
  for (int64_t d : dims) {
    out += std::to_string(d);
    out += 'x';
  }
  out += DTypeName(dtype);
  out += '>';
  return out;
}

TensorType ParseTensorType(std::string_view text) {
  constexpr std::string_view kPrefix = "tensor<";
  if (text.substr(0, kPrefix.size()) != kPrefix) {
    Fail("expected 'tensor<'", 0);
  }
  if (text.empty() || text.back() != '>') {
    Fail("unterminated tensor type, expected '>'", text.size());
  }
  const size_t body_begin = kPrefix.size();
  const size_t body_end = text.size() - 1;

  TensorType result;
  size_t pos = body_begin;
  // Leading "<int>x" groups are dims; whatever remains is the element type.
  while (pos < body_end) {
    size_t digits_end = pos;
    while (digits_end < body_end &&
           std::isdigit(static_cast<unsigned char>(text[digits_end]))) {
      ++digits_end;
    }
    if (text[pos] == '?') Fail("dynamic dimension '?' is not supported", pos);
    if (text[pos] == '-') Fail("negative dimension", pos);
    if (digits_end == pos) break;
    if (digits_end >= body_end || text[digits_end] != 'x') {
      Fail("expected 'x' after dimension", digits_end);
    }
    int64_t dim = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos,
                                     text.data() + digits_end, dim);
    if (ec != std::errc() || ptr != text.data() + digits_end) {
      Fail("dimension out of range", pos);
    }
    if (dim <= 0) Fail("dimension must be positive", pos);
    result.dims.push_back(dim);
    pos = digits_end + 1;
  }

  std::string_view element = text.substr(pos, body_end - pos);
  if (element.empty()) Fail("missing element type", pos);
  for (size_t i = 0; i < element.size(); ++i) {
    const char c = element[i];
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      Fail("unexpected character in tensor type", pos + i);
    }
  }
  auto dtype = DTypeFromName(element);
  if (!dtype) {
    throw UnsupportedDtypeError(
        "unsupported element type '" + std::string(element) + "'", 1,
        static_cast<int>(pos) + 1);
  }
  result.dtype = *dtype;
  return result;
}

}  // namespace sle
