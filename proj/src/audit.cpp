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

#include "dce/audit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "dce/error.hpp"
#include "dce/lexer.hpp"

namespace dce::audit {
namespace {

bool brackets_balanced(const CodeSnippet& snippet) {
  int depth = 0;
  for (const auto& line : lex::scrub_lines(snippet.texts(), snippet.language())) {
    for (char c : line) {
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') {
        if (--depth < 0) return false;
      }
    }
  }
  return depth == 0;
}

}  // namespace

std::string_view to_string(DiffOp op) {
  switch (op) {
    case DiffOp::kKept: return "kept";
    case DiffOp::kRemoved: return "removed";
    case DiffOp::kAdded: return "added";
    case DiffOp::kModified: return "modified";
  }
  return "unknown";
}

std::string normalize_line(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

std::vector<DiffEntry> diff_lines(const CodeSnippet& original, const CodeSnippet& fixed) {
  const std::size_t n = original.size();
  const std::size_t m = fixed.size();
  std::vector<std::string> a(n);
  std::vector<std::string> b(m);
  for (std::size_t i = 0; i < n; ++i) a[i] = normalize_line(original.lines()[i].text);
  for (std::size_t j = 0; j < m; ++j) b[j] = normalize_line(fixed.lines()[j].text);

  // Suffix DP over (matches, exact matches), compared lexicographically.
  using Score = std::pair<std::size_t, std::size_t>;
  std::vector<std::vector<Score>> best(n + 1, std::vector<Score>(m + 1, {0, 0}));
  auto gain = [&](std::size_t i, std::size_t j) -> std::optional<Score> {
    if (a[i] != b[j]) return std::nullopt;
    return Score{1, original.lines()[i].text == fixed.lines()[j].text ? 1 : 0};
  };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      Score s = std::max(best[i + 1][j], best[i][j + 1]);
      if (auto g = gain(i, j)) {
        Score diag{best[i + 1][j + 1].first + g->first, best[i + 1][j + 1].second + g->second};
        s = std::max(s, diag);
      }
      best[i][j] = s;
    }
  }

  std::vector<DiffEntry> raw;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m) {
      if (auto g = gain(i, j)) {
        Score diag{best[i + 1][j + 1].first + g->first, best[i + 1][j + 1].second + g->second};
        if (diag == best[i][j]) {
          raw.push_back({DiffOp::kKept, i + 1, j + 1});
          ++i;
          ++j;
          continue;
        }
      }
      if (best[i + 1][j] == best[i][j]) {
        raw.push_back({DiffOp::kRemoved, i + 1, std::nullopt});
        ++i;
      } else {
        raw.push_back({DiffOp::kAdded, std::nullopt, j + 1});
        ++j;
      }
    } else if (i < n) {
      raw.push_back({DiffOp::kRemoved, i + 1, std::nullopt});
      ++i;
    } else {
      raw.push_back({DiffOp::kAdded, std::nullopt, j + 1});
      ++j;
    }
  }

  // Pair removals with additions inside each run between kept lines.
  std::vector<DiffEntry> out;
  std::size_t k = 0;
  while (k < raw.size()) {
    if (raw[k].op == DiffOp::kKept) {
      out.push_back(raw[k++]);
      continue;
    }
    std::vector<DiffEntry> removed;
    std::vector<DiffEntry> added;
    while (k < raw.size() && raw[k].op != DiffOp::kKept) {
      (raw[k].op == DiffOp::kRemoved ? removed : added).push_back(raw[k]);
      ++k;
    }
    std::size_t pairs = std::min(removed.size(), added.size());
    for (std::size_t p = 0; p < pairs; ++p) {
      out.push_back({DiffOp::kModified, removed[p].orig_index, added[p].new_index});
    }
    for (std::size_t p = pairs; p < removed.size(); ++p) out.push_back(removed[p]);
    for (std::size_t p = pairs; p < added.size(); ++p) out.push_back(added[p]);
  }
  return out;
}

AuditReport audit(const CodeSnippet& original, const std::optional<std::vector<GoldLine>>& gold,
                  std::string_view fixed) {
  AuditReport report;
  std::optional<CodeSnippet> parsed;
  try {
    parsed = split_lines(fixed, original.language(), original.origin_id());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptySource) throw;
  }

  std::vector<DiffEntry> diff;
  if (parsed) {
    report.parse_ok = brackets_balanced(*parsed);
    diff = diff_lines(original, *parsed);
    report.residual_oracle_findings = oracle::annotate(*parsed).lines;
  } else {
    for (std::size_t i = 1; i <= original.size(); ++i) diff.push_back({DiffOp::kRemoved, i, {}});
  }

  std::map<std::size_t, DiffEntry> by_original;
  std::set<std::size_t> changed;
  for (const auto& entry : diff) {
    if (entry.orig_index) by_original[*entry.orig_index] = entry;
    if (entry.op == DiffOp::kRemoved || entry.op == DiffOp::kModified) changed.insert(*entry.orig_index);
    if (entry.op == DiffOp::kAdded) ++report.added_lines;
  }
  report.changed_lines = changed.size();

  if (gold) {
    std::set<std::size_t> flagged;
    for (const auto& f : report.residual_oracle_findings) flagged.insert(f.index);
    std::size_t confined = 0;
    bool all_removed = true;
    for (const auto& line : *gold) {
      if (!by_original.count(line.index)) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "gold line " + std::to_string(line.index) + " is outside the original");
      }
      if (changed.count(line.index)) ++confined;
      const DiffEntry& entry = by_original.at(line.index);
      switch (entry.op) {
        case DiffOp::kRemoved:
        case DiffOp::kAdded:
          break;
        case DiffOp::kModified:
          if (flagged.count(*entry.new_index)) all_removed = false;
          break;
        case DiffOp::kKept:
          if (line.type != DeadType::kUnused || flagged.count(*entry.new_index)) all_removed = false;
          break;
      }
    }
    report.removed_all_gold = all_removed;
    report.diff_confinement =
        changed.empty() ? 1.0 : static_cast<double>(confined) / static_cast<double>(changed.size());
  } else {
    report.diff_confinement = 1.0;
  }
  return report;
}

}  // namespace dce::audit
