// Copyright 2026 The DCE Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dce/code_model.hpp"

#include <algorithm>
#include <array>

#include "dce/error.hpp"
#include "dce/lexer.hpp"

namespace dce {
namespace {

constexpr std::array<std::string_view, 3> kPythonGuarded{"if", "elif",
                                                         "while"};
constexpr std::array<std::string_view, 13> kPythonBlock{
    "else", "try",  "finally", "except", "def",  "class", "for",
    "with", "async", "match",  "case",   "lambda", "elif"};
constexpr std::array<std::string_view, 14> kJavaStructuralHeads{
    "else",   "try",    "catch",     "finally", "do",        "switch",
    "case",   "default", "class",    "interface", "enum",    "record",
    "synchronized", "static"};

template <std::size_t N>
bool one_of(std::string_view word, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), word) != set.end();
}

bool only_punctuation(std::string_view text, std::string_view allowed) {
  return !text.empty() && text.find_first_not_of(allowed) == std::string_view::npos;
}

// Guard span in column coordinates [begin, end) for a Python condition line.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::optional<Span> python_guard(std::string_view scrubbed) {
  auto lead = scrubbed.find_first_not_of(" \t");
  if (lead == std::string_view::npos) return std::nullopt;
  auto head = lex::head_word(scrubbed.substr(lead));
  if (!one_of(head, kPythonGuarded)) return std::nullopt;
  std::size_t begin = lead + head.size();
  // The header ends at the first colon outside brackets that is neither a
  // walrus nor a lambda's; a header without one continues on the next line.
  std::size_t end = lex::rtrim(scrubbed).size();
  int depth = 0;
  int lambdas = 0;
  for (std::size_t k = begin; k < end; ++k) {
    const char c = scrubbed[k];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth == 0 && scrubbed.compare(k, 6, "lambda") == 0 &&
        (k == 0 || !lex::is_ident_char(scrubbed[k - 1])) &&
        (k + 6 >= scrubbed.size() || !lex::is_ident_char(scrubbed[k + 6]))) {
      ++lambdas;
    }
    if (c != ':' || depth != 0) continue;
    if (k + 1 < scrubbed.size() && scrubbed[k + 1] == '=') continue;
    if (lambdas > 0) {
      --lambdas;
      continue;
    }
    end = k;
    break;
  }
  while (begin < end && (scrubbed[begin] == ' ' || scrubbed[begin] == '\t')) {
    ++begin;
  }
  while (end > begin && (scrubbed[end - 1] == ' ' || scrubbed[end - 1] == '\t')) {
    --end;
  }
  if (begin >= end) return std::nullopt;
  return Span{begin, end};
}

// Position of the control keyword in a Java line, skipping leading '}' and
// an `else` before `if`.
std::optional<std::pair<std::size_t, std::string_view>> java_keyword(
    std::string_view scrubbed) {
  std::size_t i = scrubbed.find_first_not_of(" \t}");
  if (i == std::string_view::npos) return std::nullopt;
  auto head = lex::head_word(scrubbed.substr(i));
  if (head == "else") {
    std::size_t j = scrubbed.find_first_not_of(" \t", i + head.size());
    if (j == std::string_view::npos) return std::nullopt;
    auto next = lex::head_word(scrubbed.substr(j));
    if (next != "if") return std::nullopt;
    return std::make_pair(j, next);
  }
  if (head == "if" || head == "while" || head == "for") {
    return std::make_pair(i, head);
  }
  return std::nullopt;
}

std::optional<Span> java_guard(std::string_view scrubbed) {
  auto keyword = java_keyword(scrubbed);
  if (!keyword) return std::nullopt;
  auto [pos, word] = *keyword;
  std::size_t open = scrubbed.find_first_not_of(" \t", pos + word.size());
  if (open == std::string_view::npos || scrubbed[open] != '(') {
    return std::nullopt;
  }
  int depth = 0;
  std::size_t close = std::string_view::npos;
  std::vector<std::size_t> semicolons;
  for (std::size_t k = open; k < scrubbed.size(); ++k) {
    char c = scrubbed[k];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') {
      --depth;
      if (depth == 0) {
        close = k;
        break;
      }
    }
    if (c == ';' && depth == 1) semicolons.push_back(k);
  }
  Span span{open + 1, close == std::string_view::npos
                          ? lex::rtrim(scrubbed).size()
                          : close};
  if (word == "for") {
    // Only the classic three-clause form has a guard; for-each does not.
    if (semicolons.size() != 2) return std::nullopt;
    span = Span{semicolons[0] + 1, semicolons[1]};
  }
  while (span.begin < span.end && scrubbed[span.begin] == ' ') ++span.begin;
  while (span.end > span.begin && scrubbed[span.end - 1] == ' ') --span.end;
  if (span.begin >= span.end) return std::nullopt;
  return span;
}

std::optional<Span> guard_span(std::string_view scrubbed, Language language) {
  return language == Language::kPython ? python_guard(scrubbed)
                                       : java_guard(scrubbed);
}

LineKind classify_python(std::string_view code) {
  auto head = lex::head_word(code);
  if (one_of(head, kPythonGuarded)) {
    return python_guard(code).has_value() ? LineKind::kCondition
                                          : LineKind::kStructural;
  }
  if (one_of(head, kPythonBlock) && code.back() == ':') {
    return LineKind::kStructural;
  }
  if (head == "else" || head == "try" || head == "finally") {
    return LineKind::kStructural;
  }
  if (only_punctuation(code, ")]}, ")) return LineKind::kStructural;
  return LineKind::kStatement;
}

LineKind classify_java(std::string_view code) {
  if (only_punctuation(code, "{}();, ")) return LineKind::kStructural;
  if (java_keyword(code)) {
    return java_guard(code).has_value() ? LineKind::kCondition
                                        : LineKind::kStructural;
  }
  std::string_view body = lex::trim(code.substr(code.find_first_not_of("} ")));
  auto head = lex::head_word(body);
  if (one_of(head, kJavaStructuralHeads)) {
    if (head == "static" && body.find('=') != std::string_view::npos) {
      return LineKind::kStatement;
    }
    if (head == "static" && body.find('(') == std::string_view::npos &&
        body.back() != '{') {
      return LineKind::kStatement;
    }
    return LineKind::kStructural;
  }
  for (auto word : {std::string_view("class "), std::string_view("interface "),
                    std::string_view("enum ")}) {
    if (body.find(word) != std::string_view::npos && body.back() == '{') {
      return LineKind::kStructural;
    }
  }
  // Method headers: a signature opening a block without an assignment.
  if (body.back() == '{' && body.find('=') == std::string_view::npos &&
      head != "return" && head != "new") {
    return LineKind::kStructural;
  }
  return LineKind::kStatement;
}

std::vector<std::string> split_physical(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < normalized.size()) {
    auto nl = normalized.find('\n', start);
    if (nl == std::string_view::npos) nl = normalized.size();
    out.emplace_back(normalized.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::vector<LineRecord> build_records(const std::vector<std::string>& texts,
                                      Language language) {
  auto scrubbed = lex::scrub_lines(texts, language);
  std::vector<LineRecord> records;
  records.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    records.push_back({i + 1, texts[i],
                       classify_scrubbed(texts[i], scrubbed[i], language),
                       lex::indent_width(texts[i])});
  }
  return records;
}

}  // namespace

std::string_view to_string(LineKind kind) {
  switch (kind) {
    case LineKind::kCondition: return "condition";
    case LineKind::kStatement: return "statement";
    case LineKind::kStructural: return "structural";
    case LineKind::kBlankOrComment: return "blank_or_comment";
  }
  return "unknown";
}

CodeSnippet::CodeSnippet(Language language, std::vector<LineRecord> lines,
                         std::optional<std::string> origin_id)
    : language_(language), lines_(std::move(lines)),
      origin_id_(std::move(origin_id)) {
  if (lines_.empty()) {
    throw Error(ErrorCode::kEmptySource, "a snippet needs at least one line");
  }
  for (std::size_t i = 0; i < lines_.size(); ++i) lines_[i].index = i + 1;
}

const LineRecord& CodeSnippet::line(std::size_t index) const {
  if (index < 1 || index > lines_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "line " + std::to_string(index) + " of " +
                    std::to_string(lines_.size()));
  }
  return lines_[index - 1];
}

std::vector<std::string> CodeSnippet::texts() const {
  std::vector<std::string> out;
  out.reserve(lines_.size());
  for (const auto& line : lines_) out.push_back(line.text);
  return out;
}

std::string normalize_source(std::string_view source) {
  std::string out;
  out.reserve(source.size() + 1);
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\r' && i + 1 < source.size() && source[i + 1] == '\n') {
      continue;
    }
    out += source[i];
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  if (!out.empty()) out += '\n';
  return out;
}

CodeSnippet split_lines(std::string_view source, Language language,
                        std::optional<std::string> origin_id) {
  std::string normalized = normalize_source(source);
  if (normalized.empty()) {
    throw Error(ErrorCode::kEmptySource, "source has no lines");
  }
  return from_line_texts(split_physical(normalized), language,
                         std::move(origin_id));
}

CodeSnippet from_line_texts(const std::vector<std::string>& texts,
                            Language language,
                            std::optional<std::string> origin_id) {
  if (texts.empty()) {
    throw Error(ErrorCode::kEmptySource, "source has no lines");
  }
  return CodeSnippet(language, build_records(texts, language),
                     std::move(origin_id));
}

LineKind classify_scrubbed(std::string_view raw, std::string_view scrubbed,
                           Language language) {
  std::string_view code = lex::trim(scrubbed);
  if (code.empty()) return LineKind::kBlankOrComment;
  // A line holding nothing but string literal pieces is a docstring or the
  // inside of one; it has no effect, like a comment.
  if (code.find_first_not_of("\" \t") == std::string_view::npos &&
      language == Language::kPython) {
    return LineKind::kBlankOrComment;
  }
  (void)raw;
  return language == Language::kPython ? classify_python(code)
                                       : classify_java(code);
}

LineKind classify_line_kind(std::string_view line, Language language) {
  lex::ScrubState state;
  return classify_scrubbed(line, lex::scrub_line(line, language, state),
                           language);
}

CodeSnippet delete_line(const CodeSnippet& snippet, std::size_t index) {
  (void)snippet.line(index);
  if (snippet.size() == 1) {
    throw Error(ErrorCode::kMinimumSizeViolation,
                "cannot delete the only line of a snippet");
  }
  std::vector<LineRecord> lines = snippet.lines();
  lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(index - 1));
  return CodeSnippet(snippet.language(), std::move(lines), snippet.origin_id());
}

CodeSnippet insert_line(const CodeSnippet& snippet, std::size_t index,
                        std::string text) {
  if (index < 1 || index > snippet.size() + 1) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "insert position " + std::to_string(index));
  }
  auto texts = snippet.texts();
  texts.insert(texts.begin() + static_cast<std::ptrdiff_t>(index - 1),
               std::move(text));
  return from_line_texts(texts, snippet.language(), snippet.origin_id());
}

std::string mask_guard(std::string_view line, Language language,
                       std::string_view mask_token) {
  lex::ScrubState state;
  std::string scrubbed = lex::scrub_line(line, language, state);
  if (classify_scrubbed(line, scrubbed, language) != LineKind::kCondition) {
    throw Error(ErrorCode::kNotACondition, std::string(line));
  }
  auto span = guard_span(scrubbed, language);
  if (!span) throw Error(ErrorCode::kMalformedGuard, std::string(line));
  std::string out(line.substr(0, span->begin));
  out += mask_token;
  out += line.substr(span->end);
  return out;
}

std::optional<std::string> guard_expression(std::string_view line,
                                            Language language) {
  lex::ScrubState state;
  std::string scrubbed = lex::scrub_line(line, language, state);
  if (classify_scrubbed(line, scrubbed, language) != LineKind::kCondition) {
    return std::nullopt;
  }
  auto span = guard_span(scrubbed, language);
  if (!span) return std::nullopt;
  return std::string(line.substr(span->begin, span->end - span->begin));
}

CodeSnippet mask_condition(const CodeSnippet& snippet, std::size_t index,
                           std::string_view mask_token) {
  const LineRecord& target = snippet.line(index);
  if (target.kind != LineKind::kCondition) {
    throw Error(ErrorCode::kNotACondition,
                "line " + std::to_string(index) + " is " +
                    std::string(to_string(target.kind)));
  }
  std::vector<LineRecord> lines = snippet.lines();
  lines[index - 1].text =
      mask_guard(target.text, snippet.language(), mask_token);
  return CodeSnippet(snippet.language(), std::move(lines), snippet.origin_id());
}

std::string render(const CodeSnippet& snippet) {
  std::string out;
  for (const auto& line : snippet.lines()) {
    out += line.text;
    out += '\n';
  }
  return out;
}

}  // namespace dce
