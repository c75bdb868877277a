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

#ifndef DCE_EXPR_EVAL_HPP_
#define DCE_EXPR_EVAL_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dce/language.hpp"

// A small constant folder over the expression subset used by dead-code
// patterns: literals, arithmetic, comparisons, boolean logic, indexing,
// and a fixed set of pure library calls (floor, sorted, abs, min, max, len,
// isinstance, ...). Anything outside the subset folds to "unknown".
namespace dce::fold {

struct Value;
using List = std::vector<Value>;

struct None {
  bool operator==(const None&) const = default;
};

// An unbound dotted name such as `Math.floor` or a type name like `str`.
struct Symbol {
  std::string path;
  bool operator==(const Symbol&) const = default;
};

struct BoundMethod {
  std::shared_ptr<Value> receiver;
  std::string name;
  bool operator==(const BoundMethod& other) const;
};

struct Value {
  std::variant<None, bool, std::int64_t, double, std::string,
               std::shared_ptr<List>, Symbol, BoundMethod>
      data;

  bool is_number() const;
  bool operator==(const Value& other) const;
};

Value make_list(List items);

struct Env {
  std::map<std::string, Value> bindings;
  // Names whose value cannot be known (assigned under control flow, by an
  // unsupported statement, ...). Reading one folds to unknown.
  std::set<std::string> unknown;

  void bind(const std::string& name, Value value);
  void forget(const std::string& name);
};

std::optional<Value> evaluate(std::string_view expr, Language language,
                              const Env& env);

// Truthiness under the language's rules: Python truthiness for Python,
// booleans only for Java. nullopt if the value has no truth value.
std::optional<bool> truth(const Value& value, Language language);

std::optional<bool> evaluate_condition(std::string_view expr, Language language,
                                       const Env& env);

enum class StepResult {
  kOk,           // statement understood and applied
  kAssertFailed, // an assert that folds to false (or unknown)
  kUnsupported,  // not a statement form the folder models
};

// Applies one straight-line statement (assignment, declaration, assert,
// import alias, in-place sort) to `env`. `assigned` receives the names the
// statement writes so callers can mark them unknown on kUnsupported.
StepResult execute(std::string_view statement, Language language, Env& env,
                   std::vector<std::string>* assigned = nullptr);

// Names an assignment or declaration statement writes, best effort.
std::vector<std::string> assignment_targets(std::string_view statement,
                                            Language language);

}  // namespace dce::fold

#endif  // DCE_EXPR_EVAL_HPP_
