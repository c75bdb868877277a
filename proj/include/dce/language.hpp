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

#ifndef DCE_LANGUAGE_HPP_
#define DCE_LANGUAGE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace dce {

enum class Language { kPython, kJava };

std::string_view to_string(Language language);

// Looks a language up by registry name ("python", "java"); throws
// Error(kUnknownLanguage) otherwise.
Language parse_language(std::string_view name);

// Guesses from a file extension; throws Error(kUnknownLanguage) when the
// extension is not registered.
Language language_for_path(std::string_view path);

std::vector<Language> registered_languages();

}  // namespace dce

#endif  // DCE_LANGUAGE_HPP_
