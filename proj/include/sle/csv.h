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

#ifndef SLE_CSV_H_
#define SLE_CSV_H_

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace sle {

struct CsvRow {
  int line = 0;  // 1-based line in the source
  std::vector<std::string> fields;
};

// Reads a headered CSV with unquoted fields. Blank lines and lines whose
// first non-blank character is '#' are skipped. Throws FormatError when the
// header does not match `expected_header` or a row has the wrong width.
std::vector<CsvRow> ReadCsv(std::istream& in,
                            const std::vector<std::string>& expected_header);

int64_t ParseCsvInt(const CsvRow& row, size_t column);
double ParseCsvDouble(const CsvRow& row, size_t column);

// "128x256" -> {128, 256}. Throws FormatError on anything else.
std::vector<int64_t> ParseShapeField(std::string_view text);
std::string FormatShapeField(const std::vector<int64_t>& dims);

}  // namespace sle

#endif  // SLE_CSV_H_
