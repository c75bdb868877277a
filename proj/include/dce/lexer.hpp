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

#ifndef DCE_LEXER_HPP_
#define DCE_LEXER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dce/language.hpp"

namespace dce::lex {

// Carries multi-line string and block-comment context from one physical line
// to the next.
struct ScrubState {
  enum class Mode { kCode, kBlockComment, kTripleSingle, kTripleDouble };
  Mode mode = Mode::kCode;
  bool fstring = false;
  bool raw = false;
};

// Returns a copy of `line` of identical length in which comments become
// spaces and string literals become '"' at their delimiters and spaces
// inside. Expressions interpolated into Python f-strings are kept verbatim
// since they are real reads. Column positions in the result line up with
// the input, so spans found in scrubbed text can be cut from the raw text.
std::string scrub_line(std::string_view line, Language language,
                       ScrubState& state);

// Scrubs a whole snippet, threading state across lines.
std::vector<std::string> scrub_lines(const std::vector<std::string>& lines,
                                     Language language);

struct Token {
  std::string text;
  std::size_t column = 0;
  bool after_dot = false;  // attribute access such as `obj.name`
};

// Identifier tokens of already-scrubbed text. Numeric literals are skipped.
std::vector<Token> identifiers(std::string_view scrubbed);

bool is_ident_start(char c);
bool is_ident_char(char c);

// Net change in (), [] and {} nesting over scrubbed text.
int bracket_delta(std::string_view scrubbed);

std::string_view trim(std::string_view text);
std::string_view rtrim(std::string_view text);

// Leading-whitespace width; a tab counts as four columns.
int indent_width(std::string_view line);
std::string_view leading_whitespace(std::string_view line);

// The first identifier-like word of trimmed text, or "" if none.
std::string_view head_word(std::string_view trimmed);

bool contains_word(std::string_view scrubbed, std::string_view word);

// Replaces whole-word occurrences of `from` with `to`. No string awareness.
std::string replace_word(std::string_view text, std::string_view from,
                         std::string_view to);

}  // namespace dce::lex

#endif  // DCE_LEXER_HPP_
