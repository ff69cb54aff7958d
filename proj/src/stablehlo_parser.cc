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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <utility>

#include "sle/errors.h"

namespace sle {

const std::vector<int64_t>* OpInfo::IntListAttr(const std::string& key) const {
  auto it = attributes.find(key);
  if (it == attributes.end()) return nullptr;
  return std::get_if<std::vector<int64_t>>(&it->second);
}

const std::string* OpInfo::StringAttr(const std::string& key) const {
  auto it = attributes.find(key);
  if (it == attributes.end()) return nullptr;
  return std::get_if<std::string>(&it->second);
}

namespace {

struct SourcePos {
  int line = 0;
  int column = 0;
};

// A logical statement: usually one physical line, plus whatever follows the
// closing brace of any region the statement owns.
struct Statement {
  std::string text;
  std::vector<SourcePos> pos;
  int first_line = 0;

  void Append(char c, SourcePos p) {
    if (text.empty()) first_line = p.line;
    text.push_back(c);
    pos.push_back(p);
  }
  void AppendPlaceholder(std::string_view s, SourcePos p) {
    for (char c : s) Append(c, p);
  }
  bool Blank() const {
    return std::all_of(text.begin(), text.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c));
    });
  }
};

struct Opener {
  char c;
  SourcePos pos;
};

[[noreturn]] void Fail(const std::string& message, SourcePos p) {
  throw SyntaxError(message, p.line, p.column);
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Nesting depth of every character, counting (), [], <>, {} and skipping
// quoted strings. The arrow "->" is not a closer. The statement is already
// known to be balanced.
std::vector<int> DepthMap(std::string_view text) {
  std::vector<int> depth(text.size(), 0);
  int d = 0;
  bool in_string = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      depth[i] = d + 1;
      if (c == '\\') {
        if (i + 1 < text.size()) depth[++i] = d + 1;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      depth[i] = d + 1;
      continue;
    }
    if (c == '(' || c == '[' || c == '{' || c == '<') {
      depth[i] = d;
      ++d;
      continue;
    }
    if (c == ')' || c == ']' || c == '}' ||
        (c == '>' && !(i > 0 && text[i - 1] == '-'))) {
      --d;
      depth[i] = d;
      continue;
    }
    depth[i] = d;
  }
  return depth;
}

// Splits text[begin, end) at commas that sit at the same depth as `begin`.
std::vector<std::pair<size_t, size_t>> SplitTopLevel(
    std::string_view text, const std::vector<int>& depth, size_t begin,
    size_t end) {
  std::vector<std::pair<size_t, size_t>> parts;
  if (begin >= end) return parts;
  const int base = depth[begin];
  size_t start = begin;
  for (size_t i = begin; i < end; ++i) {
    if (text[i] == ',' && depth[i] == base) {
      parts.emplace_back(start, i);
      start = i + 1;
    }
  }
  parts.emplace_back(start, end);
  // Trim each part.
  for (auto& [b, e] : parts) {
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Attribute extraction. These work on the text between the op name and the
// type signature; failures simply leave the attribute out.

// Index just past "key =" where key is a whole word, or npos.
size_t FindKey(std::string_view body, std::string_view key) {
  size_t from = 0;
  while (true) {
    const size_t at = body.find(key, from);
    if (at == std::string_view::npos) return at;
    from = at + 1;
    if (at > 0 && IsIdentChar(body[at - 1])) continue;
    size_t i = at + key.size();
    if (i < body.size() && IsIdentChar(body[i])) continue;
    while (i < body.size() && body[i] == ' ') ++i;
    if (i < body.size() && body[i] == '=') return i + 1;
  }
}

std::vector<int64_t> IntsIn(std::string_view s) {
  std::vector<int64_t> out;
  size_t i = 0;
  while (i < s.size()) {
    const bool neg = s[i] == '-' && i + 1 < s.size() &&
                     std::isdigit(static_cast<unsigned char>(s[i + 1]));
    if (std::isdigit(static_cast<unsigned char>(s[i])) || neg) {
      // Skip digits that are part of an identifier such as "i64".
      if (i > 0 && (std::isalpha(static_cast<unsigned char>(s[i - 1])) ||
                    s[i - 1] == '_')) {
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          ++i;
        }
        continue;
      }
      size_t j = i + (neg ? 1 : 0);
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      int64_t v = 0;
      std::from_chars(s.data() + i, s.data() + j, v);
      out.push_back(v);
      i = j;
      continue;
    }
    ++i;
  }
  return out;
}

// Extent of a balanced group starting at body[open] (one of ( [ < {).
std::optional<size_t> MatchClose(std::string_view body, size_t open) {
  int d = 0;
  for (size_t i = open; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '(' || c == '[' || c == '{' || c == '<') ++d;
    if (c == ')' || c == ']' || c == '}' ||
        (c == '>' && !(i > 0 && body[i - 1] == '-'))) {
      if (--d == 0) return i;
    }
  }
  return std::nullopt;
}

size_t SkipSpaces(std::string_view body, size_t i) {
  while (i < body.size() && body[i] == ' ') ++i;
  return i;
}

// "[1, 2]" at body[i].
std::optional<std::vector<int64_t>> BracketList(std::string_view body,
                                                size_t i) {
  i = SkipSpaces(body, i);
  if (i >= body.size() || body[i] != '[') return std::nullopt;
  auto close = MatchClose(body, i);
  if (!close) return std::nullopt;
  return IntsIn(body.substr(i, *close - i + 1));
}

// Integer-valued attribute value at body[i]: [..], array<i64: ..>,
// dense<..> : tensor<...> (splat expanded) or a scalar "3 : i64".
std::optional<std::vector<int64_t>> IntValue(std::string_view body, size_t i) {
  i = SkipSpaces(body, i);
  if (i >= body.size()) return std::nullopt;
  if (body[i] == '[') return BracketList(body, i);
  if (body.substr(i, 6) == "array<") {
    auto close = MatchClose(body, i + 5);
    if (!close) return std::nullopt;
    std::string_view inner = body.substr(i + 6, *close - i - 6);
    const size_t colon = inner.find(':');
    if (colon == std::string_view::npos) return std::vector<int64_t>{};
    return IntsIn(inner.substr(colon + 1));
  }
  if (body.substr(i, 6) == "dense<") {
    auto close = MatchClose(body, i + 5);
    if (!close) return std::nullopt;
    std::string_view inner = body.substr(i + 6, *close - i - 6);
    std::vector<int64_t> values = IntsIn(inner);
    if (inner.find('[') == std::string_view::npos && values.size() == 1) {
      // Splat: replicate to the element count of the trailing tensor type.
      size_t t = SkipSpaces(body, *close + 1);
      if (t < body.size() && body[t] == ':') {
        t = SkipSpaces(body, t + 1);
        if (body.substr(t, 7) == "tensor<") {
          auto tclose = MatchClose(body, t + 6);
          if (tclose) {
            std::string_view dims = body.substr(t + 7, *tclose - t - 7);
            int64_t count = 1;
            size_t p = 0;
            while (p < dims.size() &&
                   std::isdigit(static_cast<unsigned char>(dims[p]))) {
              int64_t d = 0;
              auto res = std::from_chars(dims.data() + p,
                                         dims.data() + dims.size(), d);
              count *= d;
              p = static_cast<size_t>(res.ptr - dims.data()) + 1;  // skip 'x'
            }
            if (count >= 1 && count <= 64) {
              values.assign(static_cast<size_t>(count), values.front());
            }
          }
        }
      }
    }
    return values;
  }
  if (std::isdigit(static_cast<unsigned char>(body[i])) || body[i] == '-') {
    size_t j = i + 1;
    while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) {
      ++j;
    }
    return IntsIn(body.substr(i, j - i));
  }
  return std::nullopt;
}

void ExtractDotAttributes(std::string_view body, OpInfo& info) {
  // Pretty form: "batching_dims = [0] x [0], contracting_dims = [2] x [1]".
  auto pair_form = [&](std::string_view key, const std::string& lhs_name,
                       const std::string& rhs_name) {
    const size_t at = FindKey(body, key);
    if (at == std::string_view::npos) return;
    auto lhs = BracketList(body, at);
    if (!lhs) return;
    const size_t lhs_open = body.find('[', at);
    const size_t lhs_close = *MatchClose(body, lhs_open);
    size_t i = SkipSpaces(body, lhs_close + 1);
    if (i >= body.size() || body[i] != 'x') return;
    auto rhs = BracketList(body, i + 1);
    if (!rhs) return;
    info.attributes[lhs_name] = *lhs;
    info.attributes[rhs_name] = *rhs;
  };
  pair_form("batching_dims", "lhs_batching_dimensions",
            "rhs_batching_dimensions");
  pair_form("contracting_dims", "lhs_contracting_dimensions",
            "rhs_contracting_dimensions");

  // Generic form: #stablehlo.dot<lhs_batching_dimensions = [0], ...>.
  for (const char* key :
       {"lhs_batching_dimensions", "rhs_batching_dimensions",
        "lhs_contracting_dimensions", "rhs_contracting_dimensions"}) {
    const size_t at = FindKey(body, key);
    if (at == std::string_view::npos) continue;
    if (auto v = BracketList(body, at)) info.attributes[key] = *v;
  }
}

std::string StripSpaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

void ExtractConvAttributes(std::string_view body, OpInfo& info) {
  // Dimension numbers: pretty "dim_numbers = [b, 0, 1, f]x[...]->[...]" or
  // generic "#stablehlo.conv<[b, 0, 1, f]x[...]->[...]>".
  if (size_t at = FindKey(body, "dim_numbers"); at != std::string_view::npos) {
    size_t i = SkipSpaces(body, at);
    size_t end = i;
    int d = 0;
    for (; end < body.size(); ++end) {
      const char c = body[end];
      if (c == '[') ++d;
      if (c == ']') --d;
      if (d == 0 && (c == ',' || c == '{' || c == '}')) break;
    }
    info.attributes["dimension_numbers"] = StripSpaces(body.substr(i, end - i));
  } else if (size_t conv = body.find("#stablehlo.conv<");
             conv != std::string_view::npos) {
    const size_t open = conv + std::string_view("#stablehlo.conv").size();
    if (auto close = MatchClose(body, open)) {
      info.attributes["dimension_numbers"] =
          StripSpaces(body.substr(open + 1, *close - open - 1));
    }
  }

  struct Alias {
    const char* generic;
    const char* pretty;
  };
  for (const Alias& a : {Alias{"window_strides", "stride"},
                         Alias{"padding", "pad"},
                         Alias{"lhs_dilation", "lhs_dilate"},
                         Alias{"rhs_dilation", "rhs_dilate"},
                         Alias{"feature_group_count", nullptr},
                         Alias{"batch_group_count", nullptr}}) {
    size_t at = FindKey(body, a.generic);
    if (at == std::string_view::npos && a.pretty != nullptr) {
      at = FindKey(body, a.pretty);
    }
    if (at == std::string_view::npos) continue;
    if (auto v = IntValue(body, at)) info.attributes[a.generic] = *v;
  }
}

// ---------------------------------------------------------------------------

// Counts %name references in `body` that are not bindings ("%x = ...").
int64_t CountValueUses(std::string_view body) {
  int64_t uses = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '%') continue;
    size_t j = i + 1;
    while (j < body.size() &&
           (std::isalnum(static_cast<unsigned char>(body[j])) ||
            body[j] == '_' || body[j] == '#' || body[j] == '.')) {
      ++j;
    }
    size_t k = j;
    while (k < body.size() && body[k] == ' ') ++k;
    const bool binding = k < body.size() && body[k] == '=' &&
                         (k + 1 >= body.size() || body[k + 1] != '=');
    if (!binding) ++uses;
    i = j - 1;
  }
  return uses;
}

class ModuleParser {
 public:
  explicit ModuleParser(std::string_view text) : text_(text) {}

  std::vector<OpInfo> Run() {
    int line = 1;
    int column = 1;
    size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      const SourcePos here{line, column};
      auto advance = [&](size_t n = 1) {
        for (size_t k = 0; k < n && i < text_.size(); ++k, ++i) {
          if (text_[i] == '\n') {
            ++line;
            column = 1;
          } else {
            ++column;
          }
        }
      };

      if (c == '\n') {
        EndOfLine();
        advance();
        continue;
      }
      if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '/') {
        while (i < text_.size() && text_[i] != '\n') advance();
        continue;
      }
      if (c == '"') {
        cur_.Append(c, here);
        advance();
        bool closed = false;
        while (i < text_.size() && text_[i] != '\n') {
          const char s = text_[i];
          cur_.Append(s, {line, column});
          advance();
          if (s == '\\' && i < text_.size() && text_[i] != '\n') {
            cur_.Append(text_[i], {line, column});
            advance();
          } else if (s == '"') {
            closed = true;
            break;
          }
        }
        if (!closed) Fail("unterminated string literal", here);
        continue;
      }
      if (c == '(' || c == '[' || c == '<') {
        delims_.push_back({c, here});
        cur_.Append(c, here);
        advance();
        continue;
      }
      if (c == '{') {
        if (OpensRegion(i + 1)) {
          OpenRegion(here);
        } else {
          delims_.push_back({c, here});
          cur_.Append(c, here);
        }
        advance();
        continue;
      }
      if (c == '}' && delims_.empty()) {
        CloseRegion(here);
        advance();
        continue;
      }
      if (c == ')' || c == ']' || c == '}' ||
          (c == '>' && !(i > 0 && text_[i - 1] == '-'))) {
        const char want = c == ')' ? '(' : c == ']' ? '[' : c == '}' ? '{' : '<';
        if (delims_.empty()) {
          Fail(std::string("unmatched '") + c + "'", here);
        }
        if (delims_.back().c != want) {
          Fail(std::string("mismatched '") + c + "', expected to close '" +
                   delims_.back().c + "' opened at " +
                   std::to_string(delims_.back().pos.line) + ":" +
                   std::to_string(delims_.back().pos.column),
               here);
        }
        delims_.pop_back();
        cur_.Append(c, here);
        advance();
        continue;
      }
      cur_.Append(c == '\t' || c == '\r' ? ' ' : c, here);
      advance();
    }
    EndOfLine();
    if (!frames_.empty()) {
      Fail("unclosed region '{'", frames_.back().open_pos);
    }
    return std::move(ops_);
  }

 private:
  struct Frame {
    Statement suspended;
    std::vector<Opener> delims;
    bool container;
    SourcePos open_pos;
  };

  // A '{' followed only by blanks or a comment up to the newline.
  bool OpensRegion(size_t i) const {
    while (i < text_.size() && (text_[i] == ' ' || text_[i] == '\t' ||
                                text_[i] == '\r')) {
      ++i;
    }
    if (i >= text_.size() || text_[i] == '\n') return true;
    return text_.compare(i, 2, "//") == 0;
  }

  void EndOfLine() {
    if (!delims_.empty()) {
      const Opener& open = delims_.back();
      Fail(std::string("unclosed '") + open.c + "'", open.pos);
    }
    Flush();
  }

  void Flush() {
    if (!cur_.Blank() && !InsideOpRegion()) ParseStatement(cur_);
    cur_ = Statement{};
  }

  bool InsideOpRegion() const {
    return std::any_of(frames_.begin(), frames_.end(),
                       [](const Frame& f) { return !f.container; });
  }

  void OpenRegion(SourcePos at) {
    std::string_view header = Trim(cur_.text);
    // Labelled regions of a multi-region op ("cond {", "reducer(...) {")
    // belong to the op on a previous line; they are never containers.
    const bool container = header.starts_with("module") ||
                           header.starts_with("func.func") ||
                           header.starts_with("\"builtin.module\"") ||
                           header.starts_with("\"func.func\"");
    frames_.push_back(Frame{std::move(cur_), std::move(delims_), container, at});
    cur_ = Statement{};
    delims_.clear();
  }

  void CloseRegion(SourcePos at) {
    if (frames_.empty()) Fail("unmatched '}'", at);
    Flush();
    Frame frame = std::move(frames_.back());
    frames_.pop_back();
    cur_ = std::move(frame.suspended);
    delims_ = std::move(frame.delims);
    cur_.AppendPlaceholder("{}", at);
  }

  TensorType ParseType(const Statement& st, size_t begin, size_t end) {
    std::string_view type = std::string_view(st.text).substr(begin, end - begin);
    try {
      return ParseTensorType(type);
    } catch (const UnsupportedDtypeError& e) {
      const SourcePos p = st.pos[begin + e.column() - 1];
      throw UnsupportedDtypeError(e.bare_message(), p.line, p.column);
    } catch (const SyntaxError& e) {
      const size_t off = std::min(begin + e.column() - 1, end - 1);
      const SourcePos p = st.pos[off];
      throw SyntaxError(e.bare_message(), p.line, p.column);
    }
  }

  void ParseStatement(const Statement& st) {
    const std::string_view text = st.text;
    const std::vector<int> depth = DepthMap(text);

    size_t end = text.size();
    // Drop a trailing location "loc(...)".
    for (size_t i = 0; i + 4 <= end; ++i) {
      if (depth[i] == 0 && text.compare(i, 4, "loc(") == 0 &&
          (i == 0 || text[i - 1] == ' ')) {
        end = i;
        break;
      }
    }

    // "%r = ..." or "%r:2 = ..." or "%a, %b = ...".
    size_t eq = std::string_view::npos;
    for (size_t i = 0; i < end; ++i) {
      if (depth[i] == 0 && text[i] == '=') {
        eq = i;
        break;
      }
    }
    if (eq == std::string_view::npos) return;
    std::string_view lhs = Trim(text.substr(0, eq));
    if (lhs.empty() || lhs.front() != '%') return;

    size_t name_begin = eq + 1;
    while (name_begin < end && text[name_begin] == ' ') ++name_begin;
    if (name_begin >= end) return;

    std::string name;
    size_t body_begin = 0;
    if (text[name_begin] == '"') {
      const size_t close = text.find('"', name_begin + 1);
      if (close == std::string_view::npos || close >= end) return;
      name = std::string(text.substr(name_begin + 1, close - name_begin - 1));
      body_begin = close + 1;
    } else {
      size_t j = name_begin;
      while (j < end && IsIdentChar(text[j])) ++j;
      name = std::string(text.substr(name_begin, j - name_begin));
      body_begin = j;
    }
    if (name.empty()) return;

    // Type signature follows the last top-level ':'.
    size_t colon = std::string_view::npos;
    for (size_t i = body_begin; i < end; ++i) {
      if (depth[i] == 0 && text[i] == ':') colon = i;
    }
    if (colon == std::string_view::npos) return;

    size_t sig_begin = colon + 1;
    while (sig_begin < end && text[sig_begin] == ' ') ++sig_begin;
    size_t sig_end = end;
    while (sig_end > sig_begin && text[sig_end - 1] == ' ') --sig_end;
    if (sig_begin >= sig_end) return;

    std::vector<std::pair<size_t, size_t>> operand_types;
    std::vector<std::pair<size_t, size_t>> result_types;
    bool functional = false;
    if (text[sig_begin] == '(') {
      auto close = MatchClose(text.substr(0, sig_end), sig_begin);
      if (!close) return;
      size_t k = *close + 1;
      while (k < sig_end && text[k] == ' ') ++k;
      if (text.compare(k, 2, "->") == 0) {
        functional = true;
        operand_types = SplitTopLevel(text, depth, sig_begin + 1, *close);
        if (operand_types.size() == 1 &&
            operand_types[0].first == operand_types[0].second) {
          operand_types.clear();
        }
        k += 2;
        while (k < sig_end && text[k] == ' ') ++k;
        if (k < sig_end && text[k] == '(') {
          auto rclose = MatchClose(text.substr(0, sig_end), k);
          if (!rclose) return;
          result_types = SplitTopLevel(text, depth, k + 1, *rclose);
        } else {
          result_types.emplace_back(k, sig_end);
        }
      }
    }
    if (!functional) {
      result_types = SplitTopLevel(text, depth, sig_begin, sig_end);
    }

    auto is_tensor = [&](std::pair<size_t, size_t> span) {
      return text.compare(span.first, 7, "tensor<") == 0;
    };
    if (result_types.empty() ||
        !std::all_of(result_types.begin(), result_types.end(), is_tensor) ||
        !std::all_of(operand_types.begin(), operand_types.end(), is_tensor)) {
      return;  // token / tuple / scalar typed: not costable
    }

    OpInfo info;
    info.source_line = st.first_line;
    info.op_kind = name.starts_with("stablehlo.")
                       ? name.substr(std::string_view("stablehlo.").size())
                       : name;

    std::vector<TensorType> results;
    for (auto [b, e] : result_types) results.push_back(ParseType(st, b, e));
    info.result = results.front();
    if (results.size() > 1) {
      info.attributes["result_count"] =
          std::vector<int64_t>{static_cast<int64_t>(results.size())};
    }

    const std::string_view body = text.substr(body_begin, colon - body_begin);
    if (functional) {
      for (auto [b, e] : operand_types) {
        info.operands.push_back(ParseType(st, b, e));
      }
    } else if (results.size() == 1) {
      // Pretty syntax with a single type: every SSA operand has that type.
      // A value followed by '=' is a region binding, not an operand.
      info.operands.assign(static_cast<size_t>(CountValueUses(body)),
                           results.front());
    } else {
      info.operands = results;
    }

    if (info.op_kind == "dot_general") ExtractDotAttributes(body, info);
    if (info.op_kind == "convolution") ExtractConvAttributes(body, info);
    ops_.push_back(std::move(info));
  }

  std::string_view text_;
  Statement cur_;
  std::vector<Opener> delims_;
  std::vector<Frame> frames_;
  std::vector<OpInfo> ops_;
};

}  // namespace

std::vector<OpInfo> ParseModule(std::string_view text) {
  return ModuleParser(text).Run();
}

}  // namespace sle
