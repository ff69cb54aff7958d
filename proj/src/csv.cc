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

#include "sle/csv.h"

#include <charconv>
#include <sstream>

#include "sle/errors.h"

namespace sle {
namespace {

std::string Trimmed(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(Trimmed(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos
                                          : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void Bad(const CsvRow& row, const std::string& what) {
  throw FormatError("line " + std::to_string(row.line) + ": " + what);
}

}  // namespace

std::vector<CsvRow> ReadCsv(std::istream& in,
                            const std::vector<std::string>& expected_header) {
  std::vector<CsvRow> rows;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trimmed(line);
    if (t.empty() || t.front() == '#') continue;
    CsvRow row{line_no, Split(t)};
    if (!have_header) {
      if (row.fields != expected_header) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        Bad(row, "expected header '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (row.fields.size() != expected_header.size()) {
      Bad(row, "expected " + std::to_string(expected_header.size()) +
                   " fields, got " + std::to_string(row.fields.size()));
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("missing CSV header");
  return rows;
}

int64_t ParseCsvInt(const CsvRow& row, size_t column) {
  const std::string& f = row.fields.at(column);
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size()) {
    Bad(row, "not an integer: '" + f + "'");
  }
  return v;
}

double ParseCsvDouble(const CsvRow& row, size_t column) {
  const std::string& f = row.fields.at(column);
  double v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size()) {
    Bad(row, "not a number: '" + f + "'");
  }
  return v;
}

std::vector<int64_t> ParseShapeField(std::string_view text) {
  std::vector<int64_t> dims;
  if (text.empty()) return dims;  // rank 0
  size_t start = 0;
  while (start <= text.size()) {
    size_t x = text.find('x', start);
    if (x == std::string_view::npos) x = text.size();
    int64_t d = 0;
    auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + x, d);
    if (ec != std::errc() || ptr != text.data() + x || d < 1) {
      throw FormatError("bad shape '" + std::string(text) + "'");
    }
    dims.push_back(d);
    start = x + 1;
  }
  return dims;
}

std::string FormatShapeField(const std::vector<int64_t>& dims) {
  std::string out;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims[i]);
  }
  return out;
}

}  // namespace sle
