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

#ifndef DCE_LABELS_HPP_
#define DCE_LABELS_HPP_

#include <array>
#include <cstddef>
#include <string_view>

namespace dce {

// Line-level dead code type.
enum class DeadType { kUnused, kUnreachable };

// Snippet-level gold label.
enum class SnippetLabel { kNormal, kUnused, kUnreachable, kBoth };

// The three classes the pivot classifier predicts over.
enum class CodeClass { kNormal = 0, kUnused = 1, kUnreachable = 2 };

inline constexpr std::array<CodeClass, 3> kAllClasses{
    CodeClass::kNormal, CodeClass::kUnused, CodeClass::kUnreachable};

std::string_view to_string(DeadType type);
std::string_view to_string(SnippetLabel label);
std::string_view to_string(CodeClass cls);

DeadType parse_dead_type(std::string_view text);
SnippetLabel parse_snippet_label(std::string_view text);
CodeClass parse_code_class(std::string_view text);

// `both` counts as unreachable in the three-class task.
CodeClass to_class(SnippetLabel label);

struct GoldLine {
  std::size_t index = 0;
  DeadType type = DeadType::kUnused;

  bool operator==(const GoldLine&) const = default;
  auto operator<=>(const GoldLine&) const = default;
};

}  // namespace dce

#endif  // DCE_LABELS_HPP_
