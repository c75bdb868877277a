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

#include "dce/labels.hpp"

#include <string>

#include "dce/error.hpp"

namespace dce {

std::string_view to_string(DeadType type) {
  return type == DeadType::kUnused ? "unused" : "unreachable";
}

std::string_view to_string(SnippetLabel label) {
  switch (label) {
    case SnippetLabel::kNormal: return "normal";
    case SnippetLabel::kUnused: return "unused";
    case SnippetLabel::kUnreachable: return "unreachable";
    case SnippetLabel::kBoth: return "both";
  }
  return "normal";
}

std::string_view to_string(CodeClass cls) {
  switch (cls) {
    case CodeClass::kNormal: return "normal";
    case CodeClass::kUnused: return "unused";
    case CodeClass::kUnreachable: return "unreachable";
  }
  return "normal";
}

DeadType parse_dead_type(std::string_view text) {
  if (text == "unused") return DeadType::kUnused;
  if (text == "unreachable") return DeadType::kUnreachable;
  throw Error(ErrorCode::kInvalidConfig, "unknown dead code type " + std::string(text));
}

SnippetLabel parse_snippet_label(std::string_view text) {
  if (text == "normal") return SnippetLabel::kNormal;
  if (text == "unused") return SnippetLabel::kUnused;
  if (text == "unreachable") return SnippetLabel::kUnreachable;
  if (text == "both") return SnippetLabel::kBoth;
  throw Error(ErrorCode::kInvalidConfig, "unknown label " + std::string(text));
}

CodeClass parse_code_class(std::string_view text) {
  if (text == "normal") return CodeClass::kNormal;
  if (text == "unused") return CodeClass::kUnused;
  if (text == "unreachable") return CodeClass::kUnreachable;
  throw Error(ErrorCode::kInvalidConfig, "unknown class " + std::string(text));
}

CodeClass to_class(SnippetLabel label) {
  switch (label) {
    case SnippetLabel::kNormal: return CodeClass::kNormal;
    case SnippetLabel::kUnused: return CodeClass::kUnused;
    case SnippetLabel::kUnreachable:
    case SnippetLabel::kBoth: return CodeClass::kUnreachable;
  }
  return CodeClass::kNormal;
}

}  // namespace dce
