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

#ifndef DCE_AUDIT_HPP_
#define DCE_AUDIT_HPP_

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "dce/code_model.hpp"
#include "dce/labels.hpp"
#include "dce/oracle.hpp"

namespace dce::audit {

enum class DiffOp { kKept, kRemoved, kAdded, kModified };

std::string_view to_string(DiffOp op);

struct DiffEntry {
  DiffOp op = DiffOp::kKept;
  std::optional<std::size_t> orig_index;  // absent for added lines
  std::optional<std::size_t> new_index;   // absent for removed lines

  bool operator==(const DiffEntry&) const = default;
};

// Whitespace is ignored when matching lines; among equally long common
// subsequences the one with the most byte-identical pairs wins. A removed
// line directly paired with an added line is reported as modified.
std::vector<DiffEntry> diff_lines(const CodeSnippet& original,
                                  const CodeSnippet& fixed);

// The line text with all whitespace removed.
std::string normalize_line(std::string_view text);

struct AuditReport {
  std::optional<bool> removed_all_gold;
  std::vector<oracle::LineFinding> residual_oracle_findings;
  double diff_confinement = 1.0;
  bool parse_ok = false;
  std::size_t changed_lines = 0;  // original lines removed or modified
  std::size_t added_lines = 0;

  bool operator==(const AuditReport&) const = default;
};

// Audits a proposed fix. A gold line counts as eliminated when the diff
// removes it, or when it survives (kept or rewritten) and the oracle does
// not flag its counterpart in the fix. Surviving unreachable lines must be
// rewritten to count.
AuditReport audit(const CodeSnippet& original,
                  const std::optional<std::vector<GoldLine>>& gold,
                  std::string_view fixed);

}  // namespace dce::audit

#endif  // DCE_AUDIT_HPP_
