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

#include "dce/lexer.hpp"

#include <cctype>

namespace dce::lex {
namespace {

bool is_prefix_letter(char c, Language language) {
  if (language != Language::kPython) return false;
  switch (c) {
    case 'r': case 'R': case 'b': case 'B': case 'u': case 'U':
    case 'f': case 'F':
      return true;
    default:
      return false;
  }
}

// Copies an f-string replacement field starting at `i` (just past '{') and
// returns the index just past the closing '}' (or line end).
std::size_t copy_interpolation(std::string_view line, std::size_t i,
                               std::string& out) {
  int depth = 0;
  bool copying = true;
  for (; i < line.size(); ++i) {
    char c = line[i];
    if (c == '{' || c == '(' || c == '[') {
      ++depth;
    } else if ((c == ')' || c == ']') && depth > 0) {
      --depth;
    } else if (c == '}') {
      if (depth == 0) {
        out[i] = ' ';
        return i + 1;
      }
      --depth;
    } else if (depth == 0 && (c == ':' || c == '!')) {
      bool is_neq = c == '!' && i + 1 < line.size() && line[i + 1] == '=';
      if (!is_neq) copying = false;
    } else if (c == '\'' || c == '"') {
      // A string nested in a replacement field is not a read.
      auto close = line.find(c, i + 1);
      if (close == std::string_view::npos) return line.size();
      i = close;
      continue;
    }
    if (copying) out[i] = c;
  }
  return i;
}

}  // namespace

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string scrub_line(std::string_view line, Language language,
                       ScrubState& state) {
  std::string out(line.size(), ' ');
  std::size_t i = 0;
  using Mode = ScrubState::Mode;

  auto in_string_body = [&](char quote, bool triple) {
    // Consumes string content until the closing delimiter or line end.
    while (i < line.size()) {
      char c = line[i];
      if (c == '\\' && !state.raw) {
        i += 2;
        continue;
      }
      if (state.fstring && c == '{') {
        if (i + 1 < line.size() && line[i + 1] == '{') {
          i += 2;
          continue;
        }
        i = copy_interpolation(line, i + 1, out);
        continue;
      }
      if (c == quote) {
        if (!triple) {
          out[i] = '"';
          ++i;
          return true;
        }
        if (line.substr(i, 3) == std::string(3, quote)) {
          out.replace(i, 3, "\"\"\"");
          i += 3;
          return true;
        }
      }
      ++i;
    }
    return false;
  };

  if (state.mode == Mode::kBlockComment) {
    auto end = line.find("*/");
    if (end == std::string_view::npos) return out;
    i = end + 2;
    state.mode = Mode::kCode;
  } else if (state.mode == Mode::kTripleSingle ||
             state.mode == Mode::kTripleDouble) {
    char quote = state.mode == Mode::kTripleSingle ? '\'' : '"';
    if (!in_string_body(quote, true)) return out;
    state = ScrubState{};
  }

  while (i < line.size()) {
    char c = line[i];
    if (language == Language::kPython && c == '#') break;
    if (language == Language::kJava && c == '/' && i + 1 < line.size()) {
      if (line[i + 1] == '/') break;
      if (line[i + 1] == '*') {
        auto end = line.find("*/", i + 2);
        if (end == std::string_view::npos) {
          state.mode = Mode::kBlockComment;
          return out;
        }
        i = end + 2;
        continue;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < line.size() &&
             (is_ident_char(line[i]) || line[i] == '.')) {
        out[i] = line[i];
        ++i;
      }
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < line.size() && is_ident_char(line[i])) ++i;
      std::string_view word = line.substr(start, i - start);
      bool prefix = word.size() <= 2 && i < line.size() &&
                    (line[i] == '\'' || line[i] == '"');
      for (char w : word) prefix = prefix && is_prefix_letter(w, language);
      if (!prefix) {
        out.replace(start, word.size(), word);
        continue;
      }
      state.fstring = word.find_first_of("fF") != std::string_view::npos;
      state.raw = word.find_first_of("rR") != std::string_view::npos;
      c = line[i];
    } else {
      state.fstring = false;
      state.raw = false;
    }
    if (c == '"' || c == '\'') {
      bool triple = line.substr(i, 3) == std::string(3, c) &&
                    (language == Language::kPython || c == '"');
      if (triple) {
        out.replace(i, 3, "\"\"\"");
        i += 3;
        if (!in_string_body(c, true)) {
          state.mode = c == '\'' ? Mode::kTripleSingle : Mode::kTripleDouble;
          return out;
        }
      } else {
        out[i] = '"';
        ++i;
        in_string_body(c, false);
      }
      state.fstring = false;
      state.raw = false;
      continue;
    }
    out[i] = c;
    ++i;
  }
  return out;
}

std::vector<std::string> scrub_lines(const std::vector<std::string>& lines,
                                     Language language) {
  ScrubState state;
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const auto& line : lines) out.push_back(scrub_line(line, language, state));
  return out;
}

std::vector<Token> identifiers(std::string_view scrubbed) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < scrubbed.size()) {
    char c = scrubbed[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < scrubbed.size() &&
             (is_ident_char(scrubbed[i]) || scrubbed[i] == '.')) {
        ++i;
      }
      continue;
    }
    if (!is_ident_start(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < scrubbed.size() && is_ident_char(scrubbed[i])) ++i;
    std::size_t k = start;
    while (k > 0 && scrubbed[k - 1] == ' ') --k;
    bool after_dot = k > 0 && scrubbed[k - 1] == '.';
    out.push_back({std::string(scrubbed.substr(start, i - start)), start,
                   after_dot});
  }
  return out;
}

int bracket_delta(std::string_view scrubbed) {
  int depth = 0;
  for (char c : scrubbed) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
  }
  return depth;
}

std::string_view trim(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(" \t\r\n\f\v");
  return text.substr(first, last - first + 1);
}

std::string_view rtrim(std::string_view text) {
  auto last = text.find_last_not_of(" \t\r\n\f\v");
  if (last == std::string_view::npos) return {};
  return text.substr(0, last + 1);
}

int indent_width(std::string_view line) {
  int width = 0;
  for (char c : line) {
    if (c == ' ') {
      width += 1;
    } else if (c == '\t') {
      width += 4;
    } else {
      break;
    }
  }
  return width;
}

std::string_view leading_whitespace(std::string_view line) {
  auto first = line.find_first_not_of(" \t");
  if (first == std::string_view::npos) return line;
  return line.substr(0, first);
}

std::string_view head_word(std::string_view trimmed) {
  std::size_t i = 0;
  while (i < trimmed.size() && is_ident_char(trimmed[i])) ++i;
  if (i == 0 || !is_ident_start(trimmed[0])) return {};
  return trimmed.substr(0, i);
}

bool contains_word(std::string_view scrubbed, std::string_view word) {
  for (const auto& token : identifiers(scrubbed)) {
    if (token.text == word) return true;
  }
  return false;
}

std::string replace_word(std::string_view text, std::string_view from,
                         std::string_view to) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_ident_start(text[i]) &&
        (i == 0 || !is_ident_char(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      auto word = text.substr(i, j - i);
      out += word == from ? to : word;
      i = j;
      continue;
    }
    out += text[i];
    ++i;
  }
  return out;
}

}  // namespace dce::lex
