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

#include <gtest/gtest.h>

#include <set>

#include "corpus_check.h"

namespace sle {
namespace {

TEST(CorpusTest, EveryFileMatchesItsGolden) {
  const auto files = testing::CorpusFiles(SLE_CORPUS_DIR);
  ASSERT_GE(files.size(), 25u);
  for (const auto& f : files) {
    EXPECT_EQ(testing::CompareWithGolden(f), "") << f.filename();
  }
}

TEST(CorpusTest, CoversEveryOpFamily) {
  std::set<std::string> kinds;
  int errors = 0;
  for (const auto& f : testing::CorpusFiles(SLE_CORPUS_DIR)) {
    for (const auto& rec : testing::GoldenRecords(f)) {
      if (rec.contains("error")) {
        ++errors;
      } else {
        kinds.insert(rec["op_kind"].get<std::string>() + "/" +
                     rec["class"].get<std::string>());
      }
    }
  }
  for (const char* k :
       {"dot_general/gemm", "dot_general/unsupported", "convolution/conv",
        "convolution/unsupported", "add/elementwise", "subtract/elementwise",
        "multiply/elementwise", "maximum/elementwise", "minimum/elementwise",
        "reduce/unsupported"}) {
    EXPECT_TRUE(kinds.count(k)) << k;
  }
  EXPECT_GE(errors, 5);
}

TEST(CorpusTest, BatchedAndUnbatchedDots) {
  bool batched = false, unbatched = false;
  for (const auto& f : testing::CorpusFiles(SLE_CORPUS_DIR)) {
    for (const auto& rec : testing::GoldenRecords(f)) {
      if (!rec.contains("gemm")) continue;
      (rec["gemm"]["batch_count"].get<int64_t>() > 1 ? batched : unbatched) =
          true;
    }
  }
  EXPECT_TRUE(batched);
  EXPECT_TRUE(unbatched);
}

}  // namespace
}  // namespace sle
