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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "sle/errors.h"
#include "sle/random.h"
#include "sle/stablehlo_parser.h"

namespace sle {
namespace {

OpInfo Dot(std::vector<int64_t> lhs, std::vector<int64_t> rhs,
           std::vector<int64_t> result, std::vector<int64_t> lhs_batch,
           std::vector<int64_t> rhs_batch, std::vector<int64_t> lhs_contract,
           std::vector<int64_t> rhs_contract) {
  OpInfo info;
  info.op_kind = "dot_general";
  info.operands = {{std::move(lhs), DType::kBF16}, {std::move(rhs), DType::kBF16}};
  info.result = {std::move(result), DType::kBF16};
  if (!lhs_batch.empty()) {
    info.attributes["lhs_batching_dimensions"] = lhs_batch;
    info.attributes["rhs_batching_dimensions"] = rhs_batch;
  }
  info.attributes["lhs_contracting_dimensions"] = lhs_contract;
  info.attributes["rhs_contracting_dimensions"] = rhs_contract;
  return info;
}

OpInfo Conv(std::vector<int64_t> in, std::vector<int64_t> kernel,
            std::vector<int64_t> out, std::vector<int64_t> strides,
            std::string layout = "[b,0,1,f]x[0,1,i,o]->[b,0,1,f]") {
  OpInfo info;
  info.op_kind = "convolution";
  info.operands = {{std::move(in), DType::kBF16},
                   {std::move(kernel), DType::kBF16}};
  info.result = {std::move(out), DType::kBF16};
  info.attributes["dimension_numbers"] = layout;
  info.attributes["window_strides"] = strides;
  return info;
}

// Counts multiplications of dot_general by visiting every (lhs element, rhs
// element) pair and keeping the pairs whose batch and contracting
// coordinates agree; each such pair is one product in the result.
int64_t BruteForceDotMultiplies(const OpInfo& info) {
  const auto& l = info.operands[0].dims;
  const auto& r = info.operands[1].dims;
  auto attr = [&](const char* key) {
    const auto* v = info.IntListAttr(key);
    return v ? *v : std::vector<int64_t>{};
  };
  const auto lb = attr("lhs_batching_dimensions");
  const auto rb = attr("rhs_batching_dimensions");
  const auto lc = attr("lhs_contracting_dimensions");
  const auto rc = attr("rhs_contracting_dimensions");
  auto unravel = [](int64_t flat, const std::vector<int64_t>& dims) {
    std::vector<int64_t> idx(dims.size());
    for (size_t d = dims.size(); d-- > 0;) {
      idx[d] = flat % dims[d];
      flat /= dims[d];
    }
    return idx;
  };
  const int64_t nl = std::accumulate(l.begin(), l.end(), int64_t{1},
                                     std::multiplies<>());
  const int64_t nr = std::accumulate(r.begin(), r.end(), int64_t{1},
                                     std::multiplies<>());
  int64_t count = 0;
  for (int64_t a = 0; a < nl; ++a) {
    const auto ia = unravel(a, l);
    for (int64_t b = 0; b < nr; ++b) {
      const auto ib = unravel(b, r);
      bool match = true;
      for (size_t i = 0; i < lb.size() && match; ++i) {
        match = ia[lb[i]] == ib[rb[i]];
      }
      for (size_t i = 0; i < lc.size() && match; ++i) {
        match = ia[lc[i]] == ib[rc[i]];
      }
      count += match;
    }
  }
  return count;
}

// Number of window placements along one spatial axis, found by sliding.
int64_t SlideCount(int64_t extent, int64_t filter, int64_t stride) {
  int64_t n = 0;
  for (int64_t p = 0; p + filter <= extent; p += stride) ++n;
  return n;
}

TEST(ClassifyTest, PlainMatmulIsGemm) {
  const ClassifiedOp c =
      Classify(Dot({64, 32}, {32, 16}, {64, 16}, {}, {}, {1}, {0}));
  ASSERT_EQ(c.ClassName(), "gemm");
  const GemmOp& g = std::get<GemmOp>(c.cls);
  EXPECT_EQ(g.shape, (GemmShape{64, 32, 16}));
  EXPECT_EQ(g.batch_count, 1);
}

TEST(ClassifyTest, BatchedMatmul) {
  const GemmOp g = DotToGemm(
      Dot({8, 64, 32}, {8, 32, 16}, {8, 64, 16}, {0}, {0}, {2}, {1}));
  EXPECT_EQ(g.shape, (GemmShape{64, 32, 16}));
  EXPECT_EQ(g.batch_count, 8);
}

TEST(ClassifyTest, ContractionMismatchThrows) {
  EXPECT_THROW(DotToGemm(Dot({64, 32}, {48, 16}, {64, 16}, {}, {}, {1}, {0})),
               ShapeMismatchError);
  const ClassifiedOp c =
      Classify(Dot({64, 32}, {48, 16}, {64, 16}, {}, {}, {1}, {0}));
  EXPECT_FALSE(c.supported());
}

TEST(ClassifyTest, BatchMismatchThrows) {
  EXPECT_THROW(DotToGemm(Dot({8, 4, 2}, {4, 2, 3}, {8, 4, 3}, {0}, {0}, {2},
                             {1})),
               ShapeMismatchError);
}

TEST(ClassifyTest, WrongResultTypeThrows) {
  EXPECT_THROW(DotToGemm(Dot({64, 32}, {32, 16}, {64, 17}, {}, {}, {1}, {0})),
               ShapeMismatchError);
}

TEST(ClassifyTest, TwoContractingDimsAreUnsupportedButCountable) {
  const OpInfo info =
      Dot({8, 4, 16}, {4, 16, 32}, {8, 32}, {}, {}, {1, 2}, {0, 1});
  EXPECT_FALSE(Classify(info).supported());
  EXPECT_EQ(DotToGemm(info).shape, (GemmShape{8, 64, 32}));
}

TEST(ClassifyTest, ElementwiseOps) {
  for (const char* op :
       {"add", "subtract", "multiply", "maximum", "minimum"}) {
    OpInfo info;
    info.op_kind = op;
    const TensorType t{{1024}, DType::kBF16};
    info.operands = {t, t};
    info.result = t;
    const ClassifiedOp c = Classify(info);
    ASSERT_EQ(c.ClassName(), "elementwise") << op;
    EXPECT_EQ(std::get<ElementwiseOp>(c.cls).tag, op);
    EXPECT_EQ(std::get<ElementwiseOp>(c.cls).type, t);
  }
}

TEST(ClassifyTest, ScalarSecondOperandIsAccepted) {
  OpInfo info;
  info.op_kind = "maximum";
  info.operands = {{{1024}, DType::kBF16}, {{}, DType::kBF16}};
  info.result = {{1024}, DType::kBF16};
  EXPECT_TRUE(Classify(info).supported());
}

TEST(ClassifyTest, GeneralBroadcastIsUnsupported) {
  OpInfo info;
  info.op_kind = "add";
  info.operands = {{{16, 8}, DType::kBF16}, {{8}, DType::kBF16}};
  info.result = {{16, 8}, DType::kBF16};
  EXPECT_FALSE(Classify(info).supported());
}

TEST(ClassifyTest, ReduceIsUnsupportedWithReason) {
  OpInfo info;
  info.op_kind = "reduce";
  info.operands = {{{16, 8}, DType::kF32}, {{}, DType::kF32}};
  info.result = {{16}, DType::kF32};
  const ClassifiedOp c = Classify(info);
  ASSERT_FALSE(c.supported());
  EXPECT_EQ(std::get<UnsupportedOp>(c.cls).reason, "reduction not modeled");
}

TEST(ClassifyTest, ConvExamples) {
  const ConvShape s = ConvToShape(
      Conv({1, 56, 56, 64}, {3, 3, 64, 128}, {1, 54, 54, 128}, {1, 1}));
  EXPECT_EQ(s, (ConvShape{56, 56, 64, 3, 3, 128, 1, 1, 1}));
  const ConvShape whole =
      ConvToShape(Conv({1, 4, 4, 1}, {4, 4, 1, 1}, {1, 1, 1, 1}, {1, 1}));
  EXPECT_EQ(whole.out_h(), 1);
  EXPECT_EQ(whole.out_w(), 1);
}

TEST(ClassifyTest, ConvOtherLayoutThrows) {
  EXPECT_THROW(ConvToShape(Conv({1, 3, 8, 8}, {8, 3, 3, 3}, {1, 8, 6, 6},
                                {1, 1}, "[b,f,0,1]x[o,i,0,1]->[b,f,0,1]")),
               UnsupportedLayoutError);
}

TEST(ClassifyTest, ConvWrongOutputThrows) {
  EXPECT_THROW(ConvToShape(Conv({1, 8, 8, 3}, {3, 3, 3, 4}, {1, 7, 6, 4},
                                {1, 1})),
               ShapeMismatchError);
}

TEST(ClassifyTest, PaddedConvIsUnsupported) {
  OpInfo info = Conv({1, 8, 8, 3}, {3, 3, 3, 8}, {1, 8, 8, 8}, {1, 1});
  info.attributes["padding"] = std::vector<int64_t>{1, 1, 1, 1};
  const ClassifiedOp c = Classify(info);
  ASSERT_FALSE(c.supported());
  EXPECT_EQ(std::get<UnsupportedOp>(c.cls).reason,
            "padded convolution not modeled");
}

// Random dot_general instances of rank <= 4 with shuffled axis positions.
TEST(ClassifyPropertyTest, GemmAccountingMatchesBruteForce) {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_batch = static_cast<int>(rng.Below(2));
    const int n_contract = 1 + static_cast<int>(rng.Below(2));
    const int lhs_free = static_cast<int>(rng.Below(4 - n_batch - n_contract + 1));
    const int rhs_free = static_cast<int>(rng.Below(4 - n_batch - n_contract + 1));
    auto size = [&] { return 1 + static_cast<int64_t>(rng.Below(4)); };
    std::vector<int64_t> batch(n_batch), contract(n_contract), lf(lhs_free),
        rf(rhs_free);
    for (auto* v : {&batch, &contract, &lf, &rf}) {
      for (auto& d : *v) d = size();
    }
    // Role of each axis: 0 batch, 1 contracting, 2 free.
    auto layout = [&](int n_free, const std::vector<int64_t>& free,
                      std::vector<int64_t>* dims, std::vector<int64_t>* bpos,
                      std::vector<int64_t>* cpos) {
      std::vector<std::pair<int, int>> axes;  // (role, index within role)
      for (int i = 0; i < n_batch; ++i) axes.push_back({0, i});
      for (int i = 0; i < n_contract; ++i) axes.push_back({1, i});
      for (int i = 0; i < n_free; ++i) axes.push_back({2, i});
      for (size_t i = axes.size(); i > 1; --i) {
        std::swap(axes[i - 1], axes[rng.Below(i)]);
      }
      bpos->assign(n_batch, 0);
      cpos->assign(n_contract, 0);
      for (size_t p = 0; p < axes.size(); ++p) {
        const auto [role, idx] = axes[p];
        if (role == 0) {
          dims->push_back(batch[idx]);
          (*bpos)[idx] = static_cast<int64_t>(p);
        } else if (role == 1) {
          dims->push_back(contract[idx]);
          (*cpos)[idx] = static_cast<int64_t>(p);
        } else {
          dims->push_back(free[idx]);
        }
      }
    };
    std::vector<int64_t> ld, rd, lb, rb, lc, rc;
    layout(lhs_free, lf, &ld, &lb, &lc);
    layout(rhs_free, rf, &rd, &rb, &rc);
    // Free dims keep their relative order in the result.
    std::vector<int64_t> result = batch;
    for (size_t p = 0; p < ld.size(); ++p) {
      if (std::find(lb.begin(), lb.end(), p) == lb.end() &&
          std::find(lc.begin(), lc.end(), p) == lc.end()) {
        result.push_back(ld[p]);
      }
    }
    for (size_t p = 0; p < rd.size(); ++p) {
      if (std::find(rb.begin(), rb.end(), p) == rb.end() &&
          std::find(rc.begin(), rc.end(), p) == rc.end()) {
        result.push_back(rd[p]);
      }
    }
    const OpInfo info = Dot(ld, rd, result, lb, rb, lc, rc);
    const GemmOp g = DotToGemm(info);
    EXPECT_EQ(g.shape.macs() * g.batch_count, BruteForceDotMultiplies(info));
    EXPECT_GE(g.shape.m, 1);
    EXPECT_GE(g.shape.k, 1);
    EXPECT_GE(g.shape.n, 1);
  }
}

TEST(ClassifyPropertyTest, ConvShapeRoundTripsAgainstSlidingWindow) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int64_t h = 1 + rng.Below(40), w = 1 + rng.Below(40);
    const int64_t fh = 1 + rng.Below(h), fw = 1 + rng.Below(w);
    const int64_t sh = 1 + rng.Below(6), sw = 1 + rng.Below(6);
    const int64_t b = 1 + rng.Below(3), c = 1 + rng.Below(8),
                  o = 1 + rng.Below(8);
    const int64_t oh = SlideCount(h, fh, sh), ow = SlideCount(w, fw, sw);
    const OpInfo info =
        Conv({b, h, w, c}, {fh, fw, c, o}, {b, oh, ow, o}, {sh, sw});
    const ConvShape s = ConvToShape(info);
    EXPECT_EQ(s, (ConvShape{h, w, c, fh, fw, o, sh, sw, b}));
    const std::vector<int64_t> rebuilt = {s.batch, s.out_h(), s.out_w(),
                                          s.num_filters};
    EXPECT_EQ(rebuilt, info.result.dims);
    EXPECT_EQ(Classify(info).ClassName(), "conv");
  }
}

}  // namespace
}  // namespace sle
