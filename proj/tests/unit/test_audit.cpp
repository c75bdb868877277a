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

#include <doctest.h>

#include <functional>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "dce/audit.hpp"
#include "dce/error.hpp"
#include "test_support.hpp"

using namespace dce;
using audit::DiffEntry;
using audit::DiffOp;

namespace {

std::vector<nlohmann::json> audit_cases() {
  std::istringstream in(testing::slurp(testing::fixtures_dir() / "audit" / "cases.jsonl"));
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

std::size_t count(const std::vector<DiffEntry>& diff, DiffOp op) {
  return static_cast<std::size_t>(
      std::count_if(diff.begin(), diff.end(), [&](const auto& e) { return e.op == op; }));
}

// Exhaustive longest common subsequence over whitespace-stripped lines.
std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == a.size() || j == b.size()) return std::size_t{0};
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::max(go(i + 1, j), go(i, j + 1));
    if (audit::normalize_line(a[i]) == audit::normalize_line(b[j])) {
      best = std::max(best, 1 + go(i + 1, j + 1));
    }
    return memo[key] = best;
  };
  return go(0, 0);
}

}  // namespace

TEST_CASE("audit verdicts match the judged fixtures") {
  const auto cases = audit_cases();
  CHECK(cases.size() == 40);
  for (const auto& c : cases) {
    INFO(c["name"].get<std::string>());
    const auto original = split_lines(c["original"].get<std::string>(),
                                      parse_language(c["language"].get<std::string>()));
    std::vector<GoldLine> gold;
    for (const auto& g : c["gold"]) {
      gold.push_back({g["index"].get<std::size_t>(), parse_dead_type(g["type"].get<std::string>())});
    }
    const auto report = audit::audit(original, gold, c["fixed"].get<std::string>());
    const auto& judged = c["judged"];
    CHECK(report.removed_all_gold == judged["removed_all_gold"].get<bool>());
    CHECK(report.changed_lines == judged["changed_lines"].get<std::size_t>());
    CHECK(report.diff_confinement ==
          doctest::Approx(judged["diff_confinement"].get<double>()).epsilon(1e-12));
    CHECK(report.parse_ok == judged["parse_ok"].get<bool>());
    CHECK(audit::audit(original, gold, c["fixed"].get<std::string>()) == report);
  }
}

TEST_CASE("audit without gold leaves removed_all_gold absent") {
  const auto s = testing::fill_str();
  const auto report = audit::audit(s, std::nullopt, testing::kFillStr);
  CHECK_FALSE(report.removed_all_gold.has_value());
  CHECK(report.diff_confinement == 1.0);
  CHECK(report.changed_lines == 0);
  REQUIRE(report.residual_oracle_findings.size() == 1);
  CHECK(report.residual_oracle_findings[0].index == 4);
}

TEST_CASE("gold outside the original is rejected") {
  try {
    audit::audit(testing::fill_str(), std::vector<GoldLine>{{12, DeadType::kUnused}}, "x = 1\n");
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndexOutOfRange);
  }
}

TEST_CASE("diff_lines basics") {
  const auto s = testing::fill_str();
  const auto same = audit::diff_lines(s, s);
  CHECK(same.size() == s.size());
  CHECK(count(same, DiffOp::kKept) == s.size());

  const auto one = audit::diff_lines(s, delete_line(s, 4));
  CHECK(count(one, DiffOp::kRemoved) == 1);
  CHECK(count(one, DiffOp::kKept) == 10);
  CHECK(std::find(one.begin(), one.end(), DiffEntry{DiffOp::kRemoved, 4, std::nullopt}) != one.end());

  const auto edited = split_lines("a = 1\nb = 2\nc = 3\n", Language::kPython);
  const auto fixed = split_lines("a = 1\nb = 5\nc = 3\nd = 4\n", Language::kPython);
  CHECK(audit::diff_lines(edited, fixed) ==
        std::vector<DiffEntry>{{DiffOp::kKept, 1, 1},
                               {DiffOp::kModified, 2, 2},
                               {DiffOp::kKept, 3, 3},
                               {DiffOp::kAdded, std::nullopt, 4}});
  CHECK(audit::to_string(DiffOp::kModified) == "modified");
}

TEST_CASE("diff prefers byte-identical pairs among equal matches") {
  const auto a = split_lines("x = 1\nx  =  1\n", Language::kPython);
  const auto b = split_lines("x  =  1\n", Language::kPython);
  CHECK(audit::diff_lines(a, b) ==
        std::vector<DiffEntry>{{DiffOp::kRemoved, 1, std::nullopt}, {DiffOp::kKept, 2, 1}});
}

TEST_CASE("diff_lines agrees with an exhaustive LCS on small inputs") {
  std::mt19937_64 rng(9);
  const std::vector<std::string> alphabet{"a = 1", "a=1", "b = 2", "c = a", "return c", "pass"};
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<std::string> a(1 + rng() % 12);
    std::vector<std::string> b(1 + rng() % 12);
    for (auto& t : a) t = alphabet[rng() % alphabet.size()];
    for (auto& t : b) t = alphabet[rng() % alphabet.size()];
    const auto sa = from_line_texts(a, Language::kPython);
    const auto sb = from_line_texts(b, Language::kPython);
    const auto diff = audit::diff_lines(sa, sb);
    const std::size_t kept = count(diff, DiffOp::kKept);
    CHECK(kept == brute_lcs(a, b));
    CHECK(kept + count(diff, DiffOp::kRemoved) + count(diff, DiffOp::kModified) == a.size());
    CHECK(kept + count(diff, DiffOp::kAdded) + count(diff, DiffOp::kModified) == b.size());
    std::size_t last_i = 0;
    std::size_t last_j = 0;
    for (const auto& e : diff) {
      if (e.op != DiffOp::kKept) continue;
      CHECK(*e.orig_index > last_i);
      CHECK(*e.new_index > last_j);
      CHECK(audit::normalize_line(a[*e.orig_index - 1]) == audit::normalize_line(b[*e.new_index - 1]));
      last_i = *e.orig_index;
      last_j = *e.new_index;
    }
    CHECK(audit::diff_lines(sa, sb) == diff);
  }
}
