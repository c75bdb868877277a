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

#include "dce/pattern_forge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "dce/error.hpp"
#include "dce/expr_eval.hpp"
#include "dce/hash.hpp"
#include "dce/lexer.hpp"

namespace dce::forge {
namespace {

constexpr std::string_view kIndent = "    ";

const std::vector<std::string> kPrefixes{"qz", "kk", "vx", "jq", "wm", "zp", "xq", "fy"};
const std::vector<std::string> kWords{"alpha", "delta", "omega", "probe", "token",
                                      "cache", "frame", "pivot", "shard", "nonce"};

// Per-instantiation generator state: seeded RNG plus a fresh-name counter.
class Gen {
 public:
  Gen(Language language, std::uint64_t seed)
      : language_(language), rng_(seed) {
    prefix_ = kPrefixes[rng_.index(kPrefixes.size())];
    counter_ = static_cast<int>(rng_.uniform(0, 5));
  }

  bool python() const { return language_ == Language::kPython; }

  std::string fresh() {
    std::string name = prefix_ + "_" + std::to_string(counter_++);
    names_.push_back(name);
    return name;
  }

  int num(int lo, int hi) { return static_cast<int>(rng_.uniform(lo, hi)); }

  // A literal like 3.7 that is never integral.
  std::string fractional(int lo, int hi) {
    return std::to_string(num(lo, hi)) + "." + std::to_string(num(1, 9));
  }

  std::string word() { return kWords[rng_.index(kWords.size())]; }

  std::string str(const std::string& text) const {
    return python() ? "'" + text + "'" : "\"" + text + "\"";
  }

  // One or two inert assignments to fresh locals.
  std::vector<std::string> body(std::string_view indent) {
    std::vector<std::string> out;
    int count = num(1, 2);
    for (int k = 0; k < count; ++k) {
      std::string name = fresh();
      std::string line(indent);
      switch (num(0, 2)) {
        case 0:
          line += python() ? name + " = " + std::to_string(num(2, 99))
                           : "int " + name + " = " + std::to_string(num(2, 99)) + ";";
          break;
        case 1: {
          std::string rhs = std::to_string(num(2, 12)) + " * " + std::to_string(num(2, 12));
          line += python() ? name + " = " + rhs : "int " + name + " = " + rhs + ";";
          break;
        }
        default:
          line += python() ? name + " = " + str(word())
                           : "String " + name + " = " + str(word()) + ";";
          break;
      }
      out.push_back(line);
    }
    return out;
  }

  // `if (<cond>) {` / `if <cond>:`
  std::string if_line(const std::string& cond) const {
    return python() ? "if " + cond + ":" : "if (" + cond + ") {";
  }

  std::string int_decl(const std::string& name, int value) const {
    return python() ? name + " = " + std::to_string(value)
                    : "int " + name + " = " + std::to_string(value) + ";";
  }

  // Closes a Java block; nothing for Python.
  void close(std::vector<std::string>& lines, std::string_view closer = "}") const {
    if (!python()) lines.emplace_back(closer);
  }

  DeadBlock finish(std::string_view id, std::vector<std::string> preamble,
                   std::string guard, std::vector<std::string> body) {
    return DeadBlock{std::move(preamble), std::move(guard), std::move(body),
                     std::string(id), language_, names_};
  }

 private:
  Language language_;
  SeededRng rng_;
  std::string prefix_;
  int counter_ = 0;
  std::vector<std::string> names_;
};

using Builder = std::function<DeadBlock(Gen&, std::string_view id)>;

// Guarded forms: preamble, always-false `if`, body, closing brace.
DeadBlock guarded(Gen& g, std::string_view id, std::vector<std::string> preamble,
                  const std::string& cond) {
  auto body = g.body(kIndent);
  g.close(body);
  return g.finish(id, std::move(preamble), g.if_line(cond), std::move(body));
}

struct Entry {
  PatternSpec spec;
  Builder build;
};

std::vector<Entry> build_registry() {
  const std::vector<Language> both{Language::kPython, Language::kJava};
  std::vector<Entry> entries;
  auto add = [&](std::string id, PatternFamily family, int arity, std::string description,
                 Builder build) {
    entries.push_back({PatternSpec{std::move(id), family, both, arity, std::move(description)},
                       std::move(build)});
  };

  add("after_return", PatternFamily::kAfterReturn, 3,
      "statements after a return inside a never-called local function",
      [](Gen& g, std::string_view id) {
        std::string fn = g.fresh();
        std::vector<std::string> pre{g.python() ? "def " + fn + "():"
                                                : "Runnable " + fn + " = () -> {"};
        std::string guard = std::string(kIndent) +
                            (g.python() ? "return " + std::to_string(g.num(0, 9)) : "return;");
        auto body = g.body(kIndent);
        g.close(body, "};");
        return g.finish(id, pre, guard, body);
      });
  add("after_return_break", PatternFamily::kAfterReturn, 3,
      "statements after an unconditional break in a loop",
      [](Gen& g, std::string_view id) {
        std::string i = g.fresh();
        int n = g.num(1, 5);
        std::vector<std::string> pre{
            g.python() ? "for " + i + " in range(" + std::to_string(n) + "):"
                       : "for (int " + i + " = 0; " + i + " < " + std::to_string(n) + "; " + i +
                             "++) {"};
        std::string guard = std::string(kIndent) + (g.python() ? "break" : "break;");
        auto body = g.body(kIndent);
        g.close(body);
        return g.finish(id, pre, guard, body);
      });
  auto covered = [](bool sign) {
    return [sign](Gen& g, std::string_view id) {
      std::string a = g.fresh();
      std::vector<std::string> pre;
      std::string first, second;
      if (sign) {
        pre.push_back(g.int_decl(a, g.num(-9, 9)));
        first = a + " >= 0";
        second = a + " < 0";
      } else {
        std::string b = g.fresh();
        pre.push_back(g.int_decl(a, g.num(0, 20)));
        pre.push_back(g.int_decl(b, g.num(0, 20)));
        first = a + " > " + b;
        second = a + " <= " + b;
      }
      std::string c = g.fresh();
      std::string d = g.fresh();
      std::string in(kIndent);
      if (g.python()) {
        pre.push_back("if " + first + ":");
        pre.push_back(in + c + " = " + std::to_string(g.num(1, 9)));
        pre.push_back("elif " + second + ":");
        pre.push_back(in + d + " = " + std::to_string(g.num(1, 9)));
        return g.finish(id, pre, "else:", g.body(kIndent));
      }
      pre.push_back("if (" + first + ") {");
      pre.push_back(in + "int " + c + " = " + std::to_string(g.num(1, 9)) + ";");
      pre.push_back("} else if (" + second + ") {");
      pre.push_back(in + "int " + d + " = " + std::to_string(g.num(1, 9)) + ";");
      auto body = g.body(kIndent);
      g.close(body);
      return g.finish(id, pre, "} else {", body);
    };
  };
  add("covered_branch", PatternFamily::kCoveredBranch, 5,
      "else branch after an if/elif pair whose guards cover every ordering", covered(false));
  add("covered_branch_sign", PatternFamily::kCoveredBranch, 4,
      "else branch after exhaustive sign tests", covered(true));
  add("floor_compare", PatternFamily::kFloorCompare, 3,
      "a value compared below its own floor",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string b = g.fresh();
        std::vector<std::string> pre;
        if (g.python()) {
          std::string m = g.fresh();
          pre = {"import math as " + m, a + " = " + g.fractional(0, 50),
                 b + " = " + m + ".floor(" + a + ")"};
        } else {
          pre = {"double " + a + " = " + g.fractional(0, 50) + ";",
                 "double " + b + " = Math.floor(" + a + ");"};
        }
        return guarded(g, id, pre, a + " < " + b);
      });
  add("floor_compare_div", PatternFamily::kFloorCompare, 4,
      "rounding down by integer division cannot exceed the original",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string b = g.fresh();
        std::string k = std::to_string(g.num(2, 9));
        std::vector<std::string> pre{g.int_decl(a, g.num(1, 99))};
        pre.push_back(g.python() ? b + " = " + a + " // " + k + " * " + k
                                 : "int " + b + " = " + a + " / " + k + " * " + k + ";");
        return guarded(g, id, pre, b + " > " + a);
      });
  add("after_assert", PatternFamily::kAfterAssert, 2,
      "a guard contradicting an assertion that just passed",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::vector<std::string> pre{g.int_decl(a, g.num(1, 9)),
                                     "assert " + a + " > 0" + (g.python() ? "" : ";")};
        return guarded(g, id, pre, a + " < 0");
      });
  add("after_assert_bound", PatternFamily::kAfterAssert, 3,
      "a guard below an asserted lower bound",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        int bound = g.num(1, 20);
        std::string c = std::to_string(bound);
        std::vector<std::string> pre{g.int_decl(a, bound + g.num(0, 20)),
                                     "assert " + a + " >= " + c + (g.python() ? "" : ";")};
        return guarded(g, id, pre, a + " < " + c);
      });
  auto sorted = [](bool pair) {
    return [pair](Gen& g, std::string_view id) {
      std::string a = g.fresh();
      std::string items = std::to_string(g.num(0, 30)) + ", " + std::to_string(g.num(0, 30)) +
                          ", " + std::to_string(g.num(0, 30));
      std::vector<std::string> pre;
      std::string cond;
      if (g.python()) {
        pre = {a + " = sorted([" + items + "])"};
        cond = pair ? a + "[1] < " + a + "[0]" : a + "[0] > " + a + "[-1]";
      } else {
        pre = {"int[] " + a + " = {" + items + "};", "java.util.Arrays.sort(" + a + ");"};
        cond = pair ? a + "[1] < " + a + "[0]"
                    : a + "[0] > " + a + "[" + a + ".length - 1]";
      }
      return guarded(g, id, pre, cond);
    };
  };
  add("sorted_array", PatternFamily::kSortedArray, 4,
      "first element of a sorted array compared above its last", sorted(false));
  add("sorted_array_pair", PatternFamily::kSortedArray, 4,
      "adjacent elements of a sorted array out of order", sorted(true));
  add("modular_arith", PatternFamily::kModularArith, 3,
      "a remainder at least as large as its divisor",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string k = std::to_string(g.num(2, 9));
        return guarded(g, id, {g.int_decl(a, g.num(1, 99))}, a + " % " + k + " >= " + k);
      });
  add("modular_arith_even", PatternFamily::kModularArith, 2,
      "an even number with remainder one modulo two",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        return guarded(g, id, {g.int_decl(a, g.num(1, 99))}, "(" + a + " * 2) % 2 == 1");
      });
  add("squared_nonneg", PatternFamily::kSquaredNonneg, 2,
      "a square compared below zero",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        return guarded(g, id, {g.int_decl(a, g.num(-30, 30))}, a + " * " + a + " < 0");
      });
  add("squared_nonneg_sum", PatternFamily::kSquaredNonneg, 3,
      "a sum of squares compared below zero",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string b = g.fresh();
        std::vector<std::string> pre{g.int_decl(a, g.num(-30, 30)), g.int_decl(b, g.num(-30, 30))};
        std::string cond = g.python() ? a + " ** 2 + " + b + " ** 2 < 0"
                                      : a + " * " + a + " + " + b + " * " + b + " < 0";
        return guarded(g, id, pre, cond);
      });
  add("string_length", PatternFamily::kStringLength, 2,
      "a string length compared below zero",
      [](Gen& g, std::string_view id) {
        std::string s = g.fresh();
        std::vector<std::string> pre{g.python() ? s + " = " + g.str(g.word())
                                                : "String " + s + " = " + g.str(g.word()) + ";"};
        return guarded(g, id, pre, g.python() ? "len(" + s + ") < 0" : s + ".length() < 0");
      });
  add("string_length_concat", PatternFamily::kStringLength, 3,
      "emptiness test on a string just extended with a marker",
      [](Gen& g, std::string_view id) {
        std::string s = g.fresh();
        std::string t = g.fresh();
        std::vector<std::string> pre;
        if (g.python()) {
          pre = {s + " = " + g.str(g.word()), t + " = " + s + " + '<PAD>'"};
        } else {
          pre = {"String " + s + " = " + g.str(g.word()) + ";",
                 "String " + t + " = " + s + " + \"<PAD>\";"};
        }
        return guarded(g, id, pre, g.python() ? "len(" + t + ") == 0" : t + ".isEmpty()");
      });
  add("type_contradiction", PatternFamily::kTypeContradiction, 2,
      "an integer tested as a string instance",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string value = std::to_string(g.num(0, 99));
        std::vector<std::string> pre{g.python() ? a + " = " + value
                                                : "Object " + a + " = " + value + ";"};
        return guarded(g, id, pre,
                       g.python() ? "isinstance(" + a + ", str)" : a + " instanceof String");
      });
  add("type_contradiction_str", PatternFamily::kTypeContradiction, 2,
      "a string tested as an integer instance",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::vector<std::string> pre{g.python() ? a + " = " + g.str(g.word())
                                                : "Object " + a + " = " + g.str(g.word()) + ";"};
        return guarded(g, id, pre,
                       g.python() ? "isinstance(" + a + ", int)" : a + " instanceof Integer");
      });
  add("tautology", PatternFamily::kTautology, 2,
      "a variable compared unequal to itself",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        return guarded(g, id, {g.int_decl(a, g.num(0, 99))}, a + " != " + a);
      });
  add("tautology_diff", PatternFamily::kTautology, 2,
      "a variable minus itself compared above zero",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        return guarded(g, id, {g.int_decl(a, g.num(0, 99))}, a + " - " + a + " > 0");
      });
  add("min_max", PatternFamily::kMinMax, 3,
      "a minimum compared above the maximum of the same pair",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string b = g.fresh();
        std::vector<std::string> pre{g.int_decl(a, g.num(0, 50)), g.int_decl(b, g.num(0, 50))};
        std::string cond = g.python() ? "min(" + a + ", " + b + ") > max(" + a + ", " + b + ")"
                                      : "Math.min(" + a + ", " + b + ") > Math.max(" + a + ", " +
                                            b + ")";
        return guarded(g, id, pre, cond);
      });
  add("min_max_bound", PatternFamily::kMinMax, 3,
      "a maximum compared below one of its arguments",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string b = g.fresh();
        std::vector<std::string> pre{g.int_decl(a, g.num(0, 50)), g.int_decl(b, g.num(0, 50))};
        std::string cond = (g.python() ? "max(" : "Math.max(") + a + ", " + b + ") < " + a;
        return guarded(g, id, pre, cond);
      });
  add("abs_nonneg", PatternFamily::kAbsNonneg, 2,
      "an absolute value compared below zero",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string cond = (g.python() ? "abs(" : "Math.abs(") + a + ") < 0";
        return guarded(g, id, {g.int_decl(a, g.num(-50, -1))}, cond);
      });
  add("abs_nonneg_triangle", PatternFamily::kAbsNonneg, 3,
      "a violation of the triangle inequality",
      [](Gen& g, std::string_view id) {
        std::string a = g.fresh();
        std::string b = g.fresh();
        std::string fn = g.python() ? "abs(" : "Math.abs(";
        std::vector<std::string> pre{g.int_decl(a, g.num(-40, 40)), g.int_decl(b, g.num(-40, 40))};
        std::string cond = fn + a + " + " + b + ") > " + fn + a + ") + " + fn + b + ")";
        return guarded(g, id, pre, cond);
      });

  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.spec.id < y.spec.id; });
  return entries;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = build_registry();
  return entries;
}

const Entry& find_entry(std::string_view id) {
  for (const auto& entry : registry()) {
    if (entry.spec.id == id) return entry;
  }
  throw Error(ErrorCode::kUnknownPattern, std::string(id));
}

// Relative depth of a block line, in four-space units.
int depth_of(std::string_view line) {
  int depth = 0;
  while (line.substr(static_cast<std::size_t>(depth) * 4, 4) == kIndent) ++depth;
  return depth;
}

bool is_terminator(std::string_view trimmed) {
  auto head = lex::head_word(trimmed);
  return head == "return" || head == "break" || head == "continue" ||
         head == "raise" || head == "throw";
}

bool opens_block(std::string_view trimmed, Language language) {
  if (trimmed.empty()) return false;
  return language == Language::kPython ? trimmed.back() == ':' : trimmed.back() == '{';
}

}  // namespace

std::string_view to_string(PatternFamily family) {
  switch (family) {
    case PatternFamily::kAfterReturn: return "after_return";
    case PatternFamily::kCoveredBranch: return "covered_branch";
    case PatternFamily::kFloorCompare: return "floor_compare";
    case PatternFamily::kAfterAssert: return "after_assert";
    case PatternFamily::kSortedArray: return "sorted_array";
    case PatternFamily::kModularArith: return "modular_arith";
    case PatternFamily::kSquaredNonneg: return "squared_nonneg";
    case PatternFamily::kStringLength: return "string_length";
    case PatternFamily::kTypeContradiction: return "type_contradiction";
    case PatternFamily::kTautology: return "tautology";
    case PatternFamily::kMinMax: return "min_max";
    case PatternFamily::kAbsNonneg: return "abs_nonneg";
  }
  return "unknown";
}

bool PatternSpec::supports(Language language) const {
  return std::find(languages.begin(), languages.end(), language) != languages.end();
}

std::vector<std::string> DeadBlock::all_lines() const {
  std::vector<std::string> out = preamble_lines;
  out.push_back(guard_line);
  out.insert(out.end(), body_lines.begin(), body_lines.end());
  return out;
}

const std::vector<PatternSpec>& catalog() {
  static const std::vector<PatternSpec> specs = [] {
    std::vector<PatternSpec> out;
    for (const auto& entry : registry()) out.push_back(entry.spec);
    return out;
  }();
  return specs;
}

const PatternSpec& find_pattern(std::string_view id) { return find_entry(id).spec; }

DeadBlock instantiate(std::string_view pattern_id, Language language, std::uint64_t seed) {
  const Entry& entry = find_entry(pattern_id);
  if (!entry.spec.supports(language)) {
    throw Error(ErrorCode::kUnsupportedLanguage,
                std::string(pattern_id) + " does not support " + std::string(to_string(language)));
  }
  std::string key = std::string(pattern_id) + "/" + std::string(to_string(language)) + "/" +
                    std::to_string(seed);
  Gen gen(language, fnv1a64(key));
  return entry.build(gen, pattern_id);
}

bool prove_guard_false(const DeadBlock& block) {
  const Language language = block.language;
  if (block.body_lines.empty()) return false;
  fold::Env env;
  // Conditions of the if/elif chain most recently opened at depth 0.
  std::vector<std::string> chain;
  bool chain_open = false;
  std::string last_top;

  for (const auto& raw : block.preamble_lines) {
    int depth = depth_of(raw);
    std::string_view line = lex::trim(raw);
    if (line.empty()) continue;
    if (depth > 0) {
      // Conditionally executed: whatever it writes is no longer known.
      for (const auto& name : fold::assignment_targets(line, language)) env.forget(name);
      continue;
    }
    last_top = std::string(line);
    auto head = lex::head_word(line.substr(line.find_first_not_of("} ")));
    bool is_else_if = line.rfind("} else if", 0) == 0;
    if (head == "if" || head == "elif" || is_else_if) {
      auto guard = guard_expression(line, language);
      if (!guard) return false;
      if (head == "if" && !is_else_if) chain.clear();
      chain.push_back(*guard);
      chain_open = true;
      continue;
    }
    if (line == "}" || line == "};") continue;
    if (head == "else") {
      chain.clear();
      chain_open = false;
      continue;
    }
    chain.clear();
    chain_open = false;
    if (opens_block(line, language)) {
      // def / for / lambda headers: bind their names as unknown.
      for (const auto& token : lex::identifiers(line)) {
        if (std::find(block.identifiers.begin(), block.identifiers.end(), token.text) !=
            block.identifiers.end()) {
          env.forget(token.text);
        }
      }
      continue;
    }
    if (fold::execute(line, language, env) != fold::StepResult::kOk) return false;
  }

  std::string_view guard = lex::trim(block.guard_line);
  int guard_depth = depth_of(block.guard_line);
  if (is_terminator(guard)) {
    // The body must sit in the same block, right after the terminator.
    if (guard_depth == 0 || !opens_block(last_top, language)) return false;
    return depth_of(block.body_lines.front()) == guard_depth;
  }
  auto head = lex::head_word(guard.substr(guard.find_first_not_of("} ")));
  if (head == "else" && guard.find("if") == std::string_view::npos) {
    if (!chain_open || chain.empty()) return false;
    for (const auto& cond : chain) {
      auto verdict = fold::evaluate_condition(cond, language, env);
      if (!verdict) return false;
      if (*verdict) return true;
    }
    return false;
  }
  if (head != "if" && head != "while") return false;
  auto expr = guard_expression(guard, language);
  if (!expr) return false;
  auto verdict = fold::evaluate_condition(*expr, language, env);
  return verdict.has_value() && !*verdict;
}

std::string indent_unit(const CodeSnippet& host) {
  int smallest = 0;
  for (const auto& line : host.lines()) {
    if (line.kind == LineKind::kBlankOrComment || line.indent == 0) continue;
    auto ws = lex::leading_whitespace(line.text);
    if (!ws.empty() && ws[0] == '\t') return "\t";
    if (smallest == 0 || line.indent < smallest) smallest = line.indent;
  }
  if (smallest <= 0) smallest = 4;
  return std::string(static_cast<std::size_t>(smallest), ' ');
}

std::vector<std::size_t> insertion_points(const CodeSnippet& host) {
  const Language language = host.language();
  const auto texts = host.texts();
  const auto scrubbed = lex::scrub_lines(texts, language);
  const std::size_t n = texts.size();
  std::vector<std::size_t> points;

  auto code_of = [&](std::size_t i) { return lex::trim(scrubbed[i - 1]); };
  auto is_code = [&](std::size_t i) {
    return host.line(i).kind != LineKind::kBlankOrComment;
  };
  auto previous_code = [&](std::size_t i) -> std::size_t {
    for (std::size_t q = i; q-- > 1;) {
      if (is_code(q)) return q;
    }
    return 0;
  };

  if (language == Language::kPython) {
    int depth = 0;
    std::vector<int> depth_before(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      depth_before[i] = depth;
      depth += lex::bracket_delta(scrubbed[i - 1]);
      if (depth < 0) depth = 0;
    }
    static const std::set<std::string_view> kStructuralOk{"for", "with", "try", "def",
                                                          "class", "async", "while"};
    for (std::size_t p = 1; p <= n; ++p) {
      const LineRecord& line = host.line(p);
      if (line.kind == LineKind::kBlankOrComment || depth_before[p] != 0) continue;
      auto code = code_of(p);
      auto head = lex::head_word(code);
      if (line.kind == LineKind::kStructural && !kStructuralOk.count(head)) continue;
      if (line.kind == LineKind::kCondition && head == "elif") continue;
      std::size_t q = previous_code(p);
      if (q != 0) {
        auto prev = lex::rtrim(code_of(q));
        if (!prev.empty() && (prev.back() == '\\' || prev.front() == '@')) continue;
        if (!prev.empty() && prev.back() == ':') {
          std::size_t header = q;
          while (header > 1 && depth_before[header] != 0) header = previous_code(header);
          if (line.indent <= host.line(header).indent) continue;
        } else if (is_terminator(prev) && host.line(q).indent == line.indent) {
          continue;
        }
      }
      // The enclosing block must not be a class body.
      bool class_body = false;
      for (std::size_t r = p; r-- > 1;) {
        if (!is_code(r) || depth_before[r] != 0 || host.line(r).indent >= line.indent) continue;
        class_body = lex::head_word(code_of(r)) == "class";
        break;
      }
      if (!class_body) points.push_back(p);
    }
    return points;
  }

  enum class Scope { kClass, kCode, kInit, kSwitch };
  std::vector<Scope> stack;
  int parens = 0;
  std::vector<std::pair<Scope, bool>> state(n + 1, {Scope::kClass, false});
  std::vector<int> parens_before(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    state[i] = {stack.empty() ? Scope::kClass : stack.back(), !stack.empty()};
    parens_before[i] = parens;
    const std::string& s = scrubbed[i - 1];
    for (std::size_t k = 0; k < s.size(); ++k) {
      char c = s[k];
      if (c == '(') ++parens;
      if (c == ')') parens = std::max(0, parens - 1);
      if (c == '{') {
        std::string_view before = lex::trim(std::string_view(s).substr(0, k));
        Scope kind = Scope::kCode;
        bool decl = lex::contains_word(before, "class") || lex::contains_word(before, "interface") ||
                    lex::contains_word(before, "enum") || lex::contains_word(before, "record");
        if (decl) {
          kind = Scope::kClass;
        } else if (!before.empty() && (before.back() == '=' || before.back() == ']' ||
                                       before.back() == ',' || before.back() == '{')) {
          kind = Scope::kInit;
        } else if (lex::head_word(before.substr(before.find_first_not_of("} ") == std::string_view::npos
                                                    ? before.size()
                                                    : before.find_first_not_of("} "))) == "switch") {
          kind = Scope::kSwitch;
        } else if (!before.empty() && before.back() == ')' && lex::contains_word(before, "new")) {
          kind = Scope::kClass;  // anonymous class body
        }
        stack.push_back(kind);
      }
      if (c == '}' && !stack.empty()) stack.pop_back();
    }
  }
  static const std::set<std::string_view> kStructuralOk{"for", "try", "do", "switch",
                                                        "synchronized"};
  static const std::set<std::string_view> kContinuations{"else", "catch", "finally", "case",
                                                         "default"};
  for (std::size_t p = 1; p <= n; ++p) {
    const LineRecord& line = host.line(p);
    if (line.kind == LineKind::kBlankOrComment) continue;
    if (!state[p].second || state[p].first != Scope::kCode || parens_before[p] != 0) continue;
    auto code = code_of(p);
    if (code.empty() || code.front() == '}') continue;
    auto head = lex::head_word(code);
    if (kContinuations.count(head)) continue;
    if (line.kind == LineKind::kStructural && !kStructuralOk.count(head)) continue;
    if ((head == "super" || head == "this") && code.size() > head.size() &&
        code.substr(head.size()).find_first_not_of(' ') != std::string_view::npos &&
        code[code.find_first_not_of(' ', head.size())] == '(') {
      continue;
    }
    std::size_t q = previous_code(p);
    if (q == 0) continue;
    auto prev = lex::rtrim(code_of(q));
    if (prev.empty()) continue;
    char last = prev.back();
    if (last != ';' && last != '{' && last != '}') continue;
    if (prev.front() == '@') continue;
    if (is_terminator(prev) && host.line(q).indent == line.indent) continue;
    points.push_back(p);
  }
  return points;
}

bool names_fresh(const CodeSnippet& host, const DeadBlock& block) {
  std::set<std::string> host_names;
  for (const auto& s : lex::scrub_lines(host.texts(), host.language())) {
    for (const auto& token : lex::identifiers(s)) host_names.insert(token.text);
  }
  for (const auto& name : block.identifiers) {
    if (host_names.count(name)) return false;
  }
  return true;
}

InsertionRecord insert_at(const CodeSnippet& host, const DeadBlock& block,
                          std::size_t position) {
  if (block.language != host.language()) {
    throw Error(ErrorCode::kUnsupportedLanguage, "block and host languages differ");
  }
  auto points = insertion_points(host);
  if (std::find(points.begin(), points.end(), position) == points.end()) {
    throw Error(ErrorCode::kNoInsertionPoint,
                "line " + std::to_string(position) + " is not a legal boundary");
  }

  // Rename any block identifier that collides with a host name.
  std::set<std::string> taken;
  for (const auto& s : lex::scrub_lines(host.texts(), host.language())) {
    for (const auto& token : lex::identifiers(s)) taken.insert(token.text);
  }
  std::vector<std::string> lines = block.all_lines();
  for (const auto& name : block.identifiers) {
    if (!taken.count(name)) continue;
    std::string renamed = name;
    while (taken.count(renamed)) renamed += "x";
    taken.insert(renamed);
    for (auto& line : lines) line = lex::replace_word(line, name, renamed);
  }

  std::string base(lex::leading_whitespace(host.line(position).text));
  std::string unit = indent_unit(host);
  auto texts = host.texts();
  std::vector<std::string> placed;
  for (const auto& line : lines) {
    int depth = depth_of(line);
    std::string text = base;
    for (int d = 0; d < depth; ++d) text += unit;
    text += line.substr(static_cast<std::size_t>(depth) * 4);
    placed.push_back(std::move(text));
  }
  texts.insert(texts.begin() + static_cast<std::ptrdiff_t>(position - 1), placed.begin(),
               placed.end());

  InsertionRecord record{from_line_texts(texts, host.language(), host.origin_id()), position,
                         position + placed.size() - 1, {}, block.pattern_id};
  std::size_t index = position;
  for (std::size_t k = 0; k < block.preamble_lines.size(); ++k) {
    record.gold_lines.push_back({index++, DeadType::kUnused});
  }
  for (std::size_t k = 0; k < 1 + block.body_lines.size(); ++k) {
    record.gold_lines.push_back({index++, DeadType::kUnreachable});
  }
  return record;
}

InsertionRecord insert(const CodeSnippet& host, const DeadBlock& block, std::uint64_t seed) {
  auto points = insertion_points(host);
  if (points.empty()) {
    throw Error(ErrorCode::kNoInsertionPoint,
                "no statement boundary in " + host.origin_id().value_or("snippet"));
  }
  SeededRng rng(fnv1a64(block.pattern_id + "/insert/" + std::to_string(seed)));
  return insert_at(host, block, points[rng.index(points.size())]);
}

CodeSnippet strip_insertion(const InsertionRecord& record) {
  auto texts = record.mutated.texts();
  texts.erase(texts.begin() + static_cast<std::ptrdiff_t>(record.span_begin - 1),
              texts.begin() + static_cast<std::ptrdiff_t>(record.span_end));
  return from_line_texts(texts, record.mutated.language(), record.mutated.origin_id());
}

PatternSplit split_patterns(std::uint64_t seed, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "train_fraction must lie in (0, 1)");
  }
  std::map<PatternFamily, std::vector<std::string>> families;
  for (const auto& spec : catalog()) families[spec.family].push_back(spec.id);
  PatternSplit split;
  for (auto& [family, ids] : families) {
    SeededRng rng(fnv1a64(std::string(to_string(family)) + "/split/" + std::to_string(seed)));
    rng.shuffle(ids);
    std::size_t m = ids.size();
    std::size_t k = 0;
    if (m >= 2) {
      auto target = static_cast<std::size_t>(std::lround(static_cast<double>(m) * train_fraction));
      k = std::clamp<std::size_t>(target, 1, m - 1);
    } else {
      k = rng.unit() < train_fraction ? 1 : 0;
    }
    split.train.insert(split.train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k));
    split.test.insert(split.test.end(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace dce::forge
