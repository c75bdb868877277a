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

#ifndef DCE_DIFF_EXEC_HPP_
#define DCE_DIFF_EXEC_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "dce/code_model.hpp"

// Differential execution: run two versions of a program under a
// user-supplied interpreter command and compare what they print.
namespace dce::diffexec {

struct ExecResult {
  int exit_code = 0;
  std::string output;

  bool operator==(const ExecResult&) const = default;
};

// `command_template` must contain "{file}", replaced by the path of a
// temporary source file. `input` is fed on stdin.
ExecResult run_program(const CodeSnippet& program, std::string_view command_template,
                       std::string_view input);

struct Comparison {
  bool same = true;
  std::size_t runs = 0;
  std::string first_difference;  // empty when same
};

// Runs both programs once per input and compares exit codes and stdout.
Comparison compare(const CodeSnippet& original, const CodeSnippet& candidate,
                   std::string_view command_template, const std::vector<std::string>& inputs);

}  // namespace dce::diffexec

#endif  // DCE_DIFF_EXEC_HPP_
