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

#include "sle/stablehlo_parser.h"

#include <gtest/gtest.h>

#include <string>

#include "sle/classify.h"
#include "sle/errors.h"
#include "sle/random.h"

namespace sle {
namespace {

TEST(ParserTest, PrettyAddGivesBothOperandsTheResultType) {
  const auto ops =
      ParseModule("%0 = stablehlo.add %a, %b : tensor<128x256xbf16>\n");
  ASSERT_EQ(ops.size(), 1u);
  const TensorType t{{128, 256}, DType::kBF16};
  EXPECT_EQ(ops[0].op_kind, "add");
  EXPECT_EQ(ops[0].operands, (std::vector<TensorType>{t, t}));
  EXPECT_EQ(ops[0].result, t);
  EXPECT_EQ(ops[0].source_line, 1);
}

TEST(ParserTest, EmptyTextGivesNoOps) {
  EXPECT_TRUE(ParseModule("").empty());
  EXPECT_TRUE(ParseModule("\n  // only a comment\n").empty());
}

TEST(ParserTest, ThreeOpModuleKeepsSourceOrder) {
  const std::string text =
      "func.func @main(%x: tensor<64x32xbf16>, %w: tensor<32x16xbf16>) -> "
      "tensor<64x16xbf16> {\n"
      "  %0 = stablehlo.dot_general %x, %w, contracting_dims = [1] x [0] : "
      "(tensor<64x32xbf16>, tensor<32x16xbf16>) -> tensor<64x16xbf16>\n"
      "  %1 = stablehlo.add %0, %0 : tensor<64x16xbf16>\n"
      "  %2 = stablehlo.maximum %1, %0 : tensor<64x16xbf16>\n"
      "  return %2 : tensor<64x16xbf16>\n"
      "}\n";
  const auto ops = ParseModule(text);
  ASSERT_EQ(ops.size(), 3u);
  EXPECT_EQ(ops[0].op_kind, "dot_general");
  EXPECT_EQ(ops[1].op_kind, "add");
  EXPECT_EQ(ops[2].op_kind, "maximum");
  EXPECT_LT(ops[0].source_line, ops[1].source_line);
  EXPECT_LT(ops[1].source_line, ops[2].source_line);
  EXPECT_EQ(*ops[0].IntListAttr("lhs_contracting_dimensions"),
            (std::vector<int64_t>{1}));
}

TEST(ParserTest, GenericDotDimensionNumbers) {
  const auto ops = ParseModule(
      "%0 = \"stablehlo.dot_general\"(%a, %b) {dot_dimension_numbers = "
      "#stablehlo.dot<lhs_batching_dimensions = [0], "
      "rhs_batching_dimensions = [0], lhs_contracting_dimensions = [2], "
      "rhs_contracting_dimensions = [1]>} : (tensor<8x64x32xbf16>, "
      "tensor<8x32x16xbf16>) -> tensor<8x64x16xbf16>\n");
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(*ops[0].IntListAttr("lhs_batching_dimensions"),
            (std::vector<int64_t>{0}));
  EXPECT_EQ(*ops[0].IntListAttr("rhs_contracting_dimensions"),
            (std::vector<int64_t>{1}));
}

TEST(ParserTest, ConvolutionAttributes) {
  const auto ops = ParseModule(
      "%0 = stablehlo.convolution(%x, %w) dim_numbers = [b, 0, 1, f]x[0, 1, "
      "i, o]->[b, 0, 1, f], window = {stride = [2, 1], pad = [[0, 0], [0, "
      "0]]} {batch_group_count = 1 : i64, feature_group_count = 1 : i64} : "
      "(tensor<1x9x9x4xbf16>, tensor<3x3x4x8xbf16>) -> "
      "tensor<1x4x7x8xbf16>\n");
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(*ops[0].StringAttr("dimension_numbers"),
            "[b,0,1,f]x[0,1,i,o]->[b,0,1,f]");
  EXPECT_EQ(*ops[0].IntListAttr("window_strides"),
            (std::vector<int64_t>{2, 1}));
  EXPECT_EQ(*ops[0].IntListAttr("padding"),
            (std::vector<int64_t>{0, 0, 0, 0}));
  EXPECT_EQ(*ops[0].IntListAttr("feature_group_count"),
            (std::vector<int64_t>{1}));
}

TEST(ParserTest, TrailingLocationIsIgnored) {
  const auto ops = ParseModule(
      "%0 = stablehlo.add %a, %b : tensor<4xf32> loc(\"x.py\":3:1)\n");
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0].result.dims, (std::vector<int64_t>{4}));
}

TEST(ParserTest, RegionBodiesAreNotReported) {
  const auto ops = ParseModule(
      "%0 = stablehlo.reduce(%a init: %i) across dimensions = [0] : "
      "(tensor<8xf32>, tensor<f32>) -> tensor<f32>\n"
      " reducer(%x: tensor<f32>, %y: tensor<f32>) {\n"
      "  %1 = stablehlo.add %x, %y : tensor<f32>\n"
      "  stablehlo.return %1 : tensor<f32>\n"
      "}\n"
      "%2 = stablehlo.add %0, %0 : tensor<f32>\n");
  ASSERT_EQ(ops.size(), 2u);
  EXPECT_EQ(ops[0].op_kind, "reduce");
  EXPECT_EQ(ops[1].op_kind, "add");
  EXPECT_EQ(ops[1].source_line, 6);
}

TEST(ParserTest, NonTensorStatementsAreSkipped) {
  const auto ops = ParseModule(
      "%t = stablehlo.create_token : !stablehlo.token\n"
      "%0 = stablehlo.add %a, %b : tensor<4xf32>\n");
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0].op_kind, "add");
}

TEST(ParserTest, UnbalancedDelimiterReportsLineAndColumn) {
  try {
    ParseModule("%0 = stablehlo.add %a, %b : tensor<4xf32>\n"
                "%1 = \"stablehlo.add\"(%a, %b : (tensor<4xf32>, "
                "tensor<4xf32>) -> tensor<4xf32>\n");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 21);
  }
}

TEST(ParserTest, BadTypeInsideStatementReportsAbsolutePosition) {
  try {
    ParseModule("\n  %0 = stablehlo.add %a, %b : tensor<4x0xf32>\n");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 40);
  }
}

TEST(ParserTest, UnknownDtypeInModule) {
  EXPECT_THROW(ParseModule("%0 = stablehlo.add %a, %b : tensor<4xcomplex<f32>>\n"),
               UnsupportedDtypeError);
}

// Generates a random module from the supported op vocabulary, in both
// syntaxes, and returns it with the number of ops it contains.
std::pair<std::string, int> RandomModule(Rng& rng) {
  std::string text = "module {\n  func.func @main() {\n";
  const int n = 1 + static_cast<int>(rng.Below(12));
  auto dim = [&] { return 1 + static_cast<int64_t>(rng.Below(300)); };
  for (int i = 0; i < n; ++i) {
    const bool generic = rng.Below(2) == 1;
    switch (rng.Below(3)) {
      case 0: {
        const int64_t m = dim(), k = dim(), nn = dim();
        const std::string a = "tensor<" + std::to_string(m) + "x" +
                              std::to_string(k) + "xbf16>";
        const std::string b = "tensor<" + std::to_string(k) + "x" +
                              std::to_string(nn) + "xbf16>";
        const std::string c = "tensor<" + std::to_string(m) + "x" +
                              std::to_string(nn) + "xbf16>";
        text += generic
                    ? "    %" + std::to_string(i) +
                          " = \"stablehlo.dot_general\"(%a, %b) "
                          "{dot_dimension_numbers = #stablehlo.dot<"
                          "lhs_contracting_dimensions = [1], "
                          "rhs_contracting_dimensions = [0]>} : (" +
                          a + ", " + b + ") -> " + c + "\n"
                    : "    %" + std::to_string(i) +
                          " = stablehlo.dot_general %a, %b, contracting_dims "
                          "= [1] x [0] : (" +
                          a + ", " + b + ") -> " + c + "\n";
        break;
      }
      case 1: {
        static const char* kOps[] = {"add", "subtract", "multiply", "maximum",
                                     "minimum"};
        const std::string op = kOps[rng.Below(5)];
        const std::string t = "tensor<" + std::to_string(dim()) + "x" +
                              std::to_string(dim()) + "xf32>";
        text += generic ? "    %" + std::to_string(i) + " = \"stablehlo." +
                              op + "\"(%a, %b) : (" + t + ", " + t + ") -> " +
                              t + "\n"
                        : "    %" + std::to_string(i) + " = stablehlo." + op +
                              " %a, %b : " + t + "\n";
        break;
      }
      default: {
        const std::string t = "tensor<" + std::to_string(dim()) + "xi32>";
        text += "    %" + std::to_string(i) + " = stablehlo.negate %a : " + t +
                "\n";
        break;
      }
    }
  }
  text += "    return\n  }\n}\n";
  return {text, n};
}

TEST(ParserPropertyTest, GeneratedModulesYieldOneRecordPerOp) {
  Rng rng(20261016);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [text, n] = RandomModule(rng);
    const auto ops = ParseModule(text);
    ASSERT_EQ(static_cast<int>(ops.size()), n) << text;
    for (size_t i = 0; i < ops.size(); ++i) {
      EXPECT_EQ(ops[i].source_line, static_cast<int>(i) + 3);
      // classify is total: every record lands in exactly one class.
      const ClassifiedOp c = Classify(ops[i]);
      EXPECT_FALSE(c.ClassName().empty());
      if (ops[i].op_kind != "negate") {
        EXPECT_TRUE(c.supported()) << text;
      }
    }
  }
}

}  // namespace
}  // namespace sle
