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

#include "dce/diff_exec.hpp"

#include <sys/wait.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "dce/error.hpp"

namespace dce::diffexec {
namespace {

std::string shell_quote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// A scratch directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dce-exec-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace

ExecResult run_program(const CodeSnippet& program, std::string_view command_template,
                       std::string_view input) {
  std::string command(command_template);
  auto slot = command.find("{file}");
  if (slot == std::string::npos) {
    throw Error(ErrorCode::kInvalidConfig, "command template must contain {file}");
  }
  ScratchDir dir;
  auto source = dir.path() / (program.language() == Language::kPython ? "main.py" : "Main.java");
  auto stdin_path = dir.path() / "input.txt";
  write(source, render(program));
  write(stdin_path, input);
  command.replace(slot, 6, shell_quote(source.string()));
  command += " < " + shell_quote(stdin_path.string()) + " 2>/dev/null";

  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) throw Error(ErrorCode::kIo, "cannot start: " + command);
  ExecResult result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

Comparison compare(const CodeSnippet& original, const CodeSnippet& candidate,
                   std::string_view command_template, const std::vector<std::string>& inputs) {
  Comparison comparison;
  std::vector<std::string> cases = inputs.empty() ? std::vector<std::string>{""} : inputs;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    auto a = run_program(original, command_template, cases[k]);
    auto b = run_program(candidate, command_template, cases[k]);
    ++comparison.runs;
    if (a != b) {
      comparison.same = false;
      comparison.first_difference =
          "input " + std::to_string(k) + ": exit " + std::to_string(a.exit_code) + " vs " +
          std::to_string(b.exit_code) + (a.output != b.output ? ", output differs" : "");
      break;
    }
  }
  return comparison;
}

}  // namespace dce::diffexec
