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

#include "layered_config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>

#include "dce/error.hpp"

namespace dce::cli {

void LayeredConfig::bind(CLI::Option* option, std::string key) {
  bindings_.push_back({option, std::move(key)});
}

std::string LayeredConfig::env_name(const std::string& key) {
  std::string name = "DCE_";
  for (char c : key) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

void LayeredConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config file " + path.string());
  CLI::ConfigTOML parser;
  for (const auto& item : parser.from_config(in)) {
    if (item.inputs.empty()) continue;
    std::string key;
    for (const auto& parent : item.parents) key += parent + ".";
    key += item.name;
    std::string value = item.inputs.front();
    for (std::size_t i = 1; i < item.inputs.size(); ++i) value += "," + item.inputs[i];
    file_values_[key] = value;
  }
}

void LayeredConfig::resolve(const CLI::App& app) {
  const std::string section = app.get_parent() ? app.get_name() + "." : "";
  for (const auto& binding : bindings_) {
    CLI::Option* option = binding.option;
    if (option->count() > 0) continue;
    bool owned = false;
    for (const CLI::Option* candidate : app.get_options()) owned |= candidate == option;
    if (!owned) continue;

    std::string value;
    bool found = false;
    if (const char* env = std::getenv(env_name(binding.key).c_str()); env && *env) {
      value = env;
      found = true;
    } else if (auto it = file_values_.find(section + binding.key); it != file_values_.end()) {
      value = it->second;
      found = true;
    } else if (auto top = file_values_.find(binding.key); top != file_values_.end()) {
      value = top->second;
      found = true;
    }
    if (!found) continue;
    try {
      option->add_result(value);
      option->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  "bad value '" + value + "' for " + binding.key + ": " + e.what());
    }
  }
}

}  // namespace dce::cli
