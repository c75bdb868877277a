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

#ifndef DCE_CODE_MODEL_HPP_
#define DCE_CODE_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dce/language.hpp"

namespace dce {

enum class LineKind { kCondition, kStatement, kStructural, kBlankOrComment };

std::string_view to_string(LineKind kind);

struct LineRecord {
  std::size_t index = 0;  // 1-based
  std::string text;
  LineKind kind = LineKind::kStatement;
  int indent = 0;

  bool operator==(const LineRecord&) const = default;
};

inline constexpr std::string_view kDefaultMaskToken = "<mask>";

// An immutable source snippet: one LineRecord per physical line, indices
// contiguous from 1. Mutating operations return new snippets.
class CodeSnippet {
 public:
  CodeSnippet(Language language, std::vector<LineRecord> lines,
              std::optional<std::string> origin_id = std::nullopt);

  Language language() const { return language_; }
  const std::vector<LineRecord>& lines() const { return lines_; }
  const std::optional<std::string>& origin_id() const { return origin_id_; }
  std::size_t size() const { return lines_.size(); }

  // 1-based access; throws Error(kIndexOutOfRange).
  const LineRecord& line(std::size_t index) const;

  std::vector<std::string> texts() const;

  bool operator==(const CodeSnippet&) const = default;

 private:
  Language language_;
  std::vector<LineRecord> lines_;
  std::optional<std::string> origin_id_;
};

// CRLF becomes LF and the text ends with exactly one newline ("" stays "").
std::string normalize_source(std::string_view source);

CodeSnippet split_lines(std::string_view source, Language language,
                        std::optional<std::string> origin_id = std::nullopt);

// Builds a snippet from already-split line texts (no trailing newlines).
CodeSnippet from_line_texts(const std::vector<std::string>& texts,
                            Language language,
                            std::optional<std::string> origin_id = std::nullopt);

LineKind classify_line_kind(std::string_view line, Language language);

// Classification of a line that has already been scrubbed by the lexer.
// `raw` is the unscrubbed text of the same line.
LineKind classify_scrubbed(std::string_view raw, std::string_view scrubbed,
                           Language language);

CodeSnippet delete_line(const CodeSnippet& snippet, std::size_t index);

CodeSnippet insert_line(const CodeSnippet& snippet, std::size_t index,
                        std::string text);

CodeSnippet mask_condition(const CodeSnippet& snippet, std::size_t index,
                           std::string_view mask_token = kDefaultMaskToken);

// The guard expression of a condition line as raw text, or nullopt when the
// line is not a condition.
std::optional<std::string> guard_expression(std::string_view line,
                                            Language language);

// Masks the guard of a single condition line.
std::string mask_guard(std::string_view line, Language language,
                       std::string_view mask_token = kDefaultMaskToken);

std::string render(const CodeSnippet& snippet);

}  // namespace dce

#endif  // DCE_CODE_MODEL_HPP_
