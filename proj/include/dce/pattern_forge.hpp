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

#ifndef DCE_PATTERN_FORGE_HPP_
#define DCE_PATTERN_FORGE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dce/code_model.hpp"
#include "dce/labels.hpp"
#include "dce/language.hpp"

namespace dce::forge {

enum class PatternFamily {
  kAfterReturn,
  kCoveredBranch,
  kFloorCompare,
  kAfterAssert,
  kSortedArray,
  kModularArith,
  kSquaredNonneg,
  kStringLength,
  kTypeContradiction,
  kTautology,
  kMinMax,
  kAbsNonneg,
};

std::string_view to_string(PatternFamily family);

struct PatternSpec {
  std::string id;
  PatternFamily family;
  std::vector<Language> languages;
  int arity = 0;  // fresh identifiers plus drawn constants
  std::string description;

  bool supports(Language language) const;
};

// An always-false guard with a self-contained preamble. Lines carry
// indentation relative to the insertion point in units of four spaces.
struct DeadBlock {
  std::vector<std::string> preamble_lines;
  std::string guard_line;
  std::vector<std::string> body_lines;
  std::string pattern_id;
  Language language = Language::kPython;
  std::vector<std::string> identifiers;  // every fresh name the block binds

  std::vector<std::string> all_lines() const;
  bool operator==(const DeadBlock&) const = default;
};

struct InsertionRecord {
  CodeSnippet mutated;
  std::size_t span_begin = 0;  // 1-based, inclusive
  std::size_t span_end = 0;    // 1-based, inclusive
  std::vector<GoldLine> gold_lines;
  std::string pattern_id;
};

// Sorted by id.
const std::vector<PatternSpec>& catalog();

const PatternSpec& find_pattern(std::string_view id);

DeadBlock instantiate(std::string_view pattern_id, Language language,
                      std::uint64_t seed);

// Legal insertion positions in `host`: a block inserted before line p
// (1-based) lands at a statement boundary inside a function body or at top
// level.
std::vector<std::size_t> insertion_points(const CodeSnippet& host);

InsertionRecord insert(const CodeSnippet& host, const DeadBlock& block,
                       std::uint64_t seed);

// Inserts at an explicit position from insertion_points().
InsertionRecord insert_at(const CodeSnippet& host, const DeadBlock& block,
                          std::size_t position);

// Removes [span_begin, span_end] from the mutant.
CodeSnippet strip_insertion(const InsertionRecord& record);

bool prove_guard_false(const DeadBlock& block);

// True when no block identifier occurs in the host outside strings and
// comments.
bool names_fresh(const CodeSnippet& host, const DeadBlock& block);

struct PatternSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
  bool operator==(const PatternSplit&) const = default;
};

PatternSplit split_patterns(std::uint64_t seed, double train_fraction);

// Indentation unit used by a host ("\t", or N spaces).
std::string indent_unit(const CodeSnippet& host);

}  // namespace dce::forge

#endif  // DCE_PATTERN_FORGE_HPP_
