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

#ifndef DCE_TOOLS_LAYERED_CONFIG_HPP_
#define DCE_TOOLS_LAYERED_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace dce::cli {

// Fills options the command line left unset, first from DCE_<KEY>
// environment variables, then from a TOML/INI config file. Keys in a
// "[subcommand]" section apply to that subcommand only.
class LayeredConfig {
 public:
  void bind(CLI::Option* option, std::string key);
  void load_file(const std::filesystem::path& path);
  // Applies environment and file values to the bound options of `app`.
  void resolve(const CLI::App& app);

  static std::string env_name(const std::string& key);

 private:
  struct Binding {
    CLI::Option* option;
    std::string key;
  };
  std::vector<Binding> bindings_;
  std::map<std::string, std::string> file_values_;
};

}  // namespace dce::cli

#endif  // DCE_TOOLS_LAYERED_CONFIG_HPP_
