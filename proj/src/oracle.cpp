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

#include "dce/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>

#include "dce/error.hpp"
#include "dce/expr_eval.hpp"
#include "dce/lexer.hpp"

namespace dce::oracle {
namespace {

// Python continues statements across any open bracket; Java statements
// only across open parentheses and brackets since braces delimit blocks.
int paren_delta(std::string_view scrubbed, Language language) {
  if (language == Language::kPython) return lex::bracket_delta(scrubbed);
  int delta = 0;
  for (char c : scrubbed) {
    if (c == '(' || c == '[') ++delta;
    if (c == ')' || c == ']') --delta;
  }
  return delta;
}

// Lexical view of a snippet shared by the detectors.
struct View {
  const CodeSnippet& snippet;
  Language language;
  std::vector<std::string> scrubbed;
  std::vector<int> depth_before;  // bracket depth at the start of each line
  std::vector<bool> starts;       // line begins a new statement
  std::vector<bool> single;       // statement begins and ends on this line
  // name -> every (line, column) occurrence outside strings and comments
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> occurrences;

  explicit View(const CodeSnippet& s)
      : snippet(s), language(s.language()), scrubbed(lex::scrub_lines(s.texts(), s.language())) {
    const std::size_t n = s.size();
    depth_before.assign(n + 1, 0);
    starts.assign(n + 1, false);
    single.assign(n + 1, false);
    int depth = 0;
    bool continued = false;
    for (std::size_t i = 1; i <= n; ++i) {
      depth_before[i] = depth;
      const std::string& line = scrubbed[i - 1];
      bool code = s.line(i).kind != LineKind::kBlankOrComment;
      starts[i] = code && depth == 0 && !continued;
      depth = std::max(0, depth + paren_delta(line, language));
      auto tail = lex::rtrim(line);
      bool backslash = !tail.empty() && tail.back() == '\\';
      if (language == Language::kPython) {
        single[i] = starts[i] && depth == 0 && !backslash;
        if (code) continued = backslash;
      } else {
        single[i] = starts[i] && depth == 0;
      }
      for (const auto& token : lex::identifiers(line)) {
        occurrences[token.text].emplace_back(i, token.column);
      }
    }
  }

  std::string_view code(std::size_t i) const { return lex::trim(scrubbed[i - 1]); }
  int indent(std::size_t i) const { return snippet.line(i).indent; }
  bool is_code(std::size_t i) const {
    return snippet.line(i).kind != LineKind::kBlankOrComment;
  }
  std::size_t column(std::size_t i) const {
    return scrubbed[i - 1].size() - lex::trim(scrubbed[i - 1]).size() -
           (scrubbed[i - 1].size() - lex::rtrim(scrubbed[i - 1]).size());
  }

  // Nearest enclosing Python block header of line i, or 0.
  std::size_t enclosing_header(std::size_t i) const {
    for (std::size_t r = i; r-- > 1;) {
      if (!starts[r] || indent(r) >= indent(i)) continue;
      auto header = lex::rtrim(code(r));
      if (!header.empty() && header.back() == ':') return r;
    }
    return 0;
  }

  bool mentions(std::initializer_list<std::string_view> names) const {
    for (auto name : names) {
      if (occurrences.count(std::string(name))) return true;
    }
    return false;
  }
};

bool is_dunder(const std::string& name) {
  return name.size() > 4 && name.rfind("__", 0) == 0 &&
         name.compare(name.size() - 2, 2, "__") == 0;
}

// Target-only bookkeeping: a name is unused when every one of its
// occurrences is a write recorded here.
struct Writes {
  std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> sites;

  void add(const std::string& name, std::size_t line, std::size_t column) {
    sites[name].insert({line, column});
  }

  void collect(const View& view, Reason reason, std::map<std::size_t, LineFinding>& out) const {
    for (const auto& [name, writes] : sites) {
      auto it = view.occurrences.find(name);
      if (it == view.occurrences.end() || it->second.size() != writes.size()) continue;
      bool only_writes = std::all_of(it->second.begin(), it->second.end(),
                                     [&](const auto& site) { return writes.count(site) > 0; });
      if (!only_writes) continue;
      for (const auto& [line, column] : writes) {
        out.emplace(line, LineFinding{line, DeadType::kUnused, reason});
      }
    }
  }
};

std::size_t count_on_line(const View& view, const std::string& name, std::size_t line) {
  auto it = view.occurrences.find(name);
  if (it == view.occurrences.end()) return 0;
  return static_cast<std::size_t>(std::count_if(
      it->second.begin(), it->second.end(), [&](const auto& site) { return site.first == line; }));
}

std::size_t count_total(const View& view, const std::string& name) {
  auto it = view.occurrences.find(name);
  return it == view.occurrences.end() ? 0 : it->second.size();
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      parts.emplace_back(lex::trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  parts.emplace_back(lex::trim(current));
  return parts;
}

// Names bound by a single-line Python import, or nullopt when ambiguous.
std::optional<std::vector<std::string>> python_import_names(std::string_view code) {
  static const std::regex kImport(R"(^import\s+(.+)$)");
  static const std::regex kFrom(R"(^from\s+([\w.]+)\s+import\s+\(?([^()]+)\)?$)");
  std::string text(code);
  std::smatch m;
  std::vector<std::string> names;
  std::string list;
  if (std::regex_match(text, m, kFrom)) {
    if (m[1].str() == "__future__") return std::nullopt;
    list = m[2].str();
  } else if (std::regex_match(text, m, kImport)) {
    list = m[1].str();
  } else {
    return std::nullopt;
  }
  static const std::regex kItem(R"(^([\w.]+)(?:\s+as\s+(\w+))?$)");
  for (const auto& part : split_commas(list)) {
    std::smatch item;
    if (part.empty()) continue;
    if (!std::regex_match(part, item, kItem)) return std::nullopt;
    if (item[2].matched) {
      names.push_back(item[2].str());
    } else {
      std::string path = item[1].str();
      names.push_back(path.substr(0, path.find('.')));
    }
  }
  if (names.empty()) return std::nullopt;
  return names;
}

void python_unused(const View& view, std::map<std::size_t, LineFinding>& out) {
  if (view.mentions({"eval", "exec", "locals", "globals", "vars"})) return;
  const std::size_t n = view.snippet.size();

  // Nested functions that are never referenced.
  static const std::regex kDef(R"(^(?:async\s+)?def\s+(\w+)\s*\()");
  for (std::size_t i = 1; i <= n; ++i) {
    if (!view.starts[i] || view.indent(i) == 0) continue;
    std::string code(view.code(i));
    std::smatch m;
    if (!std::regex_search(code, m, kDef)) continue;
    std::size_t header = view.enclosing_header(i);
    if (header == 0 || lex::head_word(view.code(header)) != "def") {
      if (header == 0 || lex::head_word(view.code(header)) != "async") continue;
    }
    std::size_t prev = i;
    while (prev-- > 1 && !view.is_code(prev)) {
    }
    if (prev >= 1 && !view.code(prev).empty() && view.code(prev).front() == '@') continue;
    std::string name = m[1].str();
    if (count_total(view, name) != 1) continue;
    out.emplace(i, LineFinding{i, DeadType::kUnused, Reason::kNeverCalled});
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (!view.is_code(j)) continue;
      if (view.starts[j] && view.indent(j) <= view.indent(i)) break;
      out.emplace(j, LineFinding{j, DeadType::kUnused, Reason::kNeverCalled});
    }
  }

  // Imports whose bound names never occur again.
  for (std::size_t i = 1; i <= n; ++i) {
    if (!view.single[i]) continue;
    auto code = view.code(i);
    auto head = lex::head_word(code);
    if ((head != "import" && head != "from") || code.find(';') != std::string_view::npos) continue;
    std::size_t header = view.enclosing_header(i);
    if (header != 0) {
      auto h = lex::head_word(view.code(header));
      if (h == "try" || h == "except") continue;
    }
    auto names = python_import_names(code);
    if (!names) continue;
    bool all_unused = std::all_of(names->begin(), names->end(), [&](const std::string& name) {
      return count_total(view, name) == count_on_line(view, name, i);
    });
    if (all_unused) out.emplace(i, LineFinding{i, DeadType::kUnused, Reason::kUnusedImport});
  }

  // Simple assignments to names that are never read.
  static const std::regex kAssign(R"(^([A-Za-z_]\w*)\s*(?::[^=]*)?=(?!=))");
  Writes writes;
  for (std::size_t i = 1; i <= n; ++i) {
    if (!view.single[i]) continue;
    std::string code(view.code(i));
    if (code.find(';') != std::string::npos) continue;
    std::smatch m;
    if (!std::regex_search(code, m, kAssign)) continue;
    std::string name = m[1].str();
    if (name == "_" || is_dunder(name)) continue;
    std::size_t header = view.enclosing_header(i);
    if (header != 0 && lex::head_word(view.code(header)) == "class") continue;
    writes.add(name, i, view.column(i));
  }
  writes.collect(view, Reason::kNeverRead, out);
}

enum class Scope { kClass, kCode, kInit, kSwitch };

Scope classify_brace(std::string_view before) {
  before = lex::trim(before);
  if (lex::contains_word(before, "class") || lex::contains_word(before, "interface") ||
      lex::contains_word(before, "enum") || lex::contains_word(before, "record")) {
    return Scope::kClass;
  }
  if (!before.empty() && (before.back() == '=' || before.back() == ']' ||
                          before.back() == ',' || before.back() == '{')) {
    return Scope::kInit;
  }
  auto first = before.find_first_not_of("} ");
  if (first != std::string_view::npos && lex::head_word(before.substr(first)) == "switch") {
    return Scope::kSwitch;
  }
  if (!before.empty() && before.back() == ')' && lex::contains_word(before, "new")) {
    return Scope::kClass;
  }
  return Scope::kCode;
}

// Innermost scope at the start of every line (nullopt at file level).
std::vector<std::optional<Scope>> java_scopes(const View& view) {
  std::vector<std::optional<Scope>> scopes(view.snippet.size() + 1);
  std::vector<Scope> stack;
  for (std::size_t i = 1; i <= view.snippet.size(); ++i) {
    if (!stack.empty()) scopes[i] = stack.back();
    const std::string& s = view.scrubbed[i - 1];
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] == '{') stack.push_back(classify_brace(std::string_view(s).substr(0, k)));
      if (s[k] == '}' && !stack.empty()) stack.pop_back();
    }
  }
  return scopes;
}

bool has_top_level_comma(std::string_view text) {
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '}' || c == '>') depth = std::max(0, depth - 1);
    if (c == ',' && depth == 0) return true;
  }
  return false;
}

void java_unused(const View& view, std::map<std::size_t, LineFinding>& out) {
  const std::size_t n = view.snippet.size();
  auto scopes = java_scopes(view);

  static const std::regex kImport(R"(^import\s+(?:static\s+)?([\w.]+)\s*;$)");
  for (std::size_t i = 1; i <= n; ++i) {
    if (scopes[i] || !view.single[i]) continue;
    std::string code(view.code(i));
    std::smatch m;
    if (!std::regex_match(code, m, kImport)) continue;
    std::string path = m[1].str();
    std::string name = path.substr(path.rfind('.') + 1);
    if (count_total(view, name) == count_on_line(view, name, i)) {
      out.emplace(i, LineFinding{i, DeadType::kUnused, Reason::kUnusedImport});
    }
  }

  static const std::set<std::string> kNotTypes{
      "return", "throw",  "new",  "else",  "case",     "package", "import",  "assert",
      "yield",  "break",  "continue", "goto", "do", "public", "protected", "abstract"};
  static const std::regex kDecl(
      R"(^((?:(?:final|private|static|transient|volatile)\s+)*)([A-Za-z_][\w.]*(?:\s*<[^;=()]*>)?(?:\s*\[\s*\])*)\s+([A-Za-z_]\w*)\s*(=(?!=).*)?;$)");
  static const std::regex kAssign(R"(^([A-Za-z_]\w*)\s*=(?!=).*;$)");
  Writes writes;
  std::set<std::string> ambiguous;
  for (std::size_t i = 1; i <= n; ++i) {
    if (!view.single[i] || !scopes[i]) continue;
    std::string code(view.code(i));
    Scope scope = *scopes[i];
    std::smatch m;
    if (std::regex_match(code, m, kDecl)) {
      std::string modifiers = m[1].str();
      std::string type = m[2].str();
      std::string name = m[3].str();
      if (kNotTypes.count(type.substr(0, type.find_first_of(" <["))) || name == "serialVersionUID") {
        continue;
      }
      if (m[4].matched && has_top_level_comma(m[4].str())) continue;
      bool is_private = lex::contains_word(modifiers, "private");
      bool local = scope == Scope::kCode || scope == Scope::kSwitch;
      if (scope == Scope::kClass && !is_private) {
        ambiguous.insert(name);
        continue;
      }
      if (!local && scope != Scope::kClass) continue;
      if (local && is_private) continue;
      auto column = view.column(i) + static_cast<std::size_t>(m.position(3));
      writes.add(name, i, column);
      continue;
    }
    if ((scope == Scope::kCode || scope == Scope::kSwitch) && std::regex_match(code, m, kAssign)) {
      writes.add(m[1].str(), i, view.column(i));
    }
  }
  for (const auto& name : ambiguous) writes.sites.erase(name);
  writes.collect(view, Reason::kNeverRead, out);
}

bool is_terminator_head(std::string_view head, Language language) {
  if (head == "return" || head == "break" || head == "continue") return true;
  return language == Language::kPython ? head == "raise" : head == "throw";
}

// True when a guard mentions nothing but literals.
bool literal_only(std::string_view guard, Language language) {
  static const std::set<std::string> kLiteralWords{"True", "False", "None", "true",
                                                   "false", "null", "and", "or", "not"};
  lex::ScrubState state;
  std::string scrubbed = lex::scrub_line(guard, language, state);
  for (const auto& token : lex::identifiers(scrubbed)) {
    if (!kLiteralWords.count(token.text)) return false;
  }
  return true;
}

void naive_after_terminator(const View& view, std::map<std::size_t, LineFinding>& out) {
  const std::size_t n = view.snippet.size();
  for (std::size_t t = 1; t <= n; ++t) {
    if (!view.starts[t]) continue;
    auto head = lex::head_word(view.code(t));
    if (!is_terminator_head(head, view.language)) continue;
    // Find where the terminating statement ends.
    std::size_t end = t;
    if (view.language == Language::kJava) {
      while (end <= n && !(lex::rtrim(view.code(end)).size() &&
                           lex::rtrim(view.code(end)).back() == ';' &&
                           view.depth_before[end] + paren_delta(view.scrubbed[end - 1], view.language) == 0)) {
        ++end;
      }
      if (end > n) continue;
    } else {
      while (end < n && view.is_code(end + 1) && !view.starts[end + 1]) ++end;
    }
    const int level = view.indent(t);
    for (std::size_t j = end + 1; j <= n; ++j) {
      if (!view.is_code(j)) continue;
      if (view.starts[j] && view.indent(j) < level) break;
      auto code = view.code(j);
      if (view.language == Language::kJava) {
        auto h = lex::head_word(code);
        if (code.front() == '}' || h == "case" || h == "default") break;
      } else {
        auto h = lex::head_word(code);
        if (view.indent(j) == level && (h == "else" || h == "elif" || h == "except" ||
                                        h == "finally" || h == "case")) {
          break;
        }
      }
      out.emplace(j, LineFinding{j, DeadType::kUnreachable, Reason::kAfterReturn});
    }
  }
}

void naive_literal_false(const View& view, std::map<std::size_t, LineFinding>& out) {
  const std::size_t n = view.snippet.size();
  fold::Env empty;
  for (std::size_t c = 1; c <= n; ++c) {
    if (view.snippet.line(c).kind != LineKind::kCondition) continue;
    auto guard = guard_expression(view.snippet.line(c).text, view.language);
    if (!guard || !literal_only(*guard, view.language)) continue;
    auto verdict = fold::evaluate_condition(*guard, view.language, empty);
    if (!verdict || *verdict) continue;
    if (view.language == Language::kPython) {
      for (std::size_t j = c + 1; j <= n; ++j) {
        if (!view.is_code(j)) continue;
        if (view.starts[j] && view.indent(j) <= view.indent(c)) break;
        out.emplace(j, LineFinding{j, DeadType::kUnreachable, Reason::kLiteralFalse});
      }
      continue;
    }
    auto tail = lex::rtrim(view.code(c));
    if (tail.empty() || tail.back() != '{') continue;
    int depth = 1;
    for (std::size_t j = c + 1; j <= n && depth > 0; ++j) {
      const std::string& s = view.scrubbed[j - 1];
      auto first = s.find_first_not_of(" \t");
      if (first != std::string::npos && s[first] == '}' && depth == 1) break;
      for (char ch : s) {
        if (ch == '{') ++depth;
        if (ch == '}') --depth;
      }
      if (view.is_code(j)) {
        out.emplace(j, LineFinding{j, DeadType::kUnreachable, Reason::kLiteralFalse});
      }
    }
  }
}

std::vector<LineFinding> to_list(const std::map<std::size_t, LineFinding>& found) {
  std::vector<LineFinding> out;
  for (const auto& [index, finding] : found) out.push_back(finding);
  return out;
}

}  // namespace

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::kNeverRead: return "never_read";
    case Reason::kUnusedImport: return "unused_import";
    case Reason::kNeverCalled: return "never_called";
    case Reason::kAfterReturn: return "after_return";
    case Reason::kLiteralFalse: return "literal_false";
    case Reason::kInsertedPattern: return "inserted_pattern";
  }
  return "unknown";
}

Reason parse_reason(std::string_view text) {
  for (auto r : {Reason::kNeverRead, Reason::kUnusedImport, Reason::kNeverCalled,
                 Reason::kAfterReturn, Reason::kLiteralFalse, Reason::kInsertedPattern}) {
    if (to_string(r) == text) return r;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown finding reason: " + std::string(text));
}

std::vector<LineFinding> find_unused(const CodeSnippet& snippet) {
  View view(snippet);
  std::map<std::size_t, LineFinding> found;
  if (snippet.language() == Language::kPython) {
    python_unused(view, found);
  } else {
    java_unused(view, found);
  }
  return to_list(found);
}

std::vector<LineFinding> find_naive_unreachable(const CodeSnippet& snippet) {
  View view(snippet);
  std::map<std::size_t, LineFinding> found;
  naive_after_terminator(view, found);
  naive_literal_false(view, found);
  return to_list(found);
}

SnippetLabel label_for(const std::vector<LineFinding>& lines) {
  bool unused = false;
  bool unreachable = false;
  for (const auto& f : lines) {
    (f.type == DeadType::kUnused ? unused : unreachable) = true;
  }
  if (unused && unreachable) return SnippetLabel::kBoth;
  if (unused) return SnippetLabel::kUnused;
  if (unreachable) return SnippetLabel::kUnreachable;
  return SnippetLabel::kNormal;
}

GoldAnnotation annotate(const CodeSnippet& snippet, const forge::InsertionRecord* known_insertion) {
  std::map<std::size_t, LineFinding> merged;
  if (known_insertion != nullptr) {
    for (const auto& gold : known_insertion->gold_lines) {
      merged.emplace(gold.index, LineFinding{gold.index, gold.type, Reason::kInsertedPattern});
    }
  }
  for (const auto& f : find_naive_unreachable(snippet)) merged.emplace(f.index, f);
  for (const auto& f : find_unused(snippet)) merged.emplace(f.index, f);
  GoldAnnotation annotation;
  annotation.lines = to_list(merged);
  annotation.label = label_for(annotation.lines);
  return annotation;
}

std::vector<GoldLine> to_gold_lines(const std::vector<LineFinding>& lines) {
  std::vector<GoldLine> out;
  for (const auto& f : lines) out.push_back({f.index, f.type});
  return out;
}

}  // namespace dce::oracle
