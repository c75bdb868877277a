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

#ifndef DCE_ORACLE_HPP_
#define DCE_ORACLE_HPP_

#include <compare>
#include <cstddef>
#include <string_view>
#include <vector>

#include "dce/code_model.hpp"
#include "dce/labels.hpp"
#include "dce/pattern_forge.hpp"

// Conservative lexical analyzer: gold labels for unused code and a naive
// unreachable-code detector with the blind spots of typical IDE checks.
namespace dce::oracle {

enum class Reason {
  kNeverRead,
  kUnusedImport,
  kNeverCalled,
  kAfterReturn,
  kLiteralFalse,
  kInsertedPattern,
};

std::string_view to_string(Reason reason);
Reason parse_reason(std::string_view text);

struct LineFinding {
  std::size_t index = 0;
  DeadType type = DeadType::kUnused;
  Reason reason = Reason::kNeverRead;

  bool operator==(const LineFinding&) const = default;
  auto operator<=>(const LineFinding&) const = default;
};

struct GoldAnnotation {
  SnippetLabel label = SnippetLabel::kNormal;
  std::vector<LineFinding> lines;  // sorted by index, one entry per index

  bool operator==(const GoldAnnotation&) const = default;
};

std::vector<LineFinding> find_unused(const CodeSnippet& snippet);

std::vector<LineFinding> find_naive_unreachable(const CodeSnippet& snippet);

// Snippet label from the set of line types present.
SnippetLabel label_for(const std::vector<LineFinding>& lines);

// Merges both detectors with the insertion's gold lines (when given, the
// snippet must be the insertion's mutant). Pattern lines win on conflicts.
GoldAnnotation annotate(const CodeSnippet& snippet,
                        const forge::InsertionRecord* known_insertion = nullptr);

std::vector<GoldLine> to_gold_lines(const std::vector<LineFinding>& lines);

}  // namespace dce::oracle

#endif  // DCE_ORACLE_HPP_
