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

#include "dce/language.hpp"

#include <array>
#include <utility>

#include "dce/error.hpp"

namespace dce {
namespace {

struct Entry {
  std::string_view name;
  Language language;
  std::array<std::string_view, 2> extensions;
};

constexpr std::array<Entry, 2> kRegistry{{
    {"python", Language::kPython, {".py", ".pyw"}},
    {"java", Language::kJava, {".java", ".jav"}},
}};

}  // namespace

std::string_view to_string(Language language) {
  for (const auto& entry : kRegistry) {
    if (entry.language == language) return entry.name;
  }
  return "unknown";
}

Language parse_language(std::string_view name) {
  for (const auto& entry : kRegistry) {
    if (entry.name == name) return entry.language;
  }
  throw Error(ErrorCode::kUnknownLanguage, std::string(name));
}

Language language_for_path(std::string_view path) {
  for (const auto& entry : kRegistry) {
    for (auto ext : entry.extensions) {
      if (path.size() >= ext.size() &&
          path.substr(path.size() - ext.size()) == ext) {
        return entry.language;
      }
    }
  }
  throw Error(ErrorCode::kUnknownLanguage,
              "cannot infer language from " + std::string(path));
}

std::vector<Language> registered_languages() {
  std::vector<Language> out;
  for (const auto& entry : kRegistry) out.push_back(entry.language);
  return out;
}

}  // namespace dce
