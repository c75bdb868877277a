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

#include <cstdlib>
#include <set>

#include "dce/diff_exec.hpp"
#include "dce/error.hpp"
#include "dce/lexer.hpp"
#include "dce/pattern_forge.hpp"
#include "test_support.hpp"

using namespace dce;
using forge::PatternFamily;

namespace {

const char* kJavaHost =
    "public class Host {\n"
    "    static int twice(int x) {\n"
    "        int y = x * 2;\n"
    "        return y;\n"
    "    }\n"
    "\n"
    "    public static void main(String[] args) {\n"
    "        System.out.println(twice(21));\n"
    "    }\n"
    "}\n";

bool python_available() { return std::system("python3 -c pass >/dev/null 2>&1") == 0; }

}  // namespace

TEST_CASE("catalog contract") {
  const auto& cat = forge::catalog();
  CHECK(cat.size() >= 16);
  std::set<std::string> ids;
  std::set<PatternFamily> families;
  for (const auto& spec : cat) {
    ids.insert(spec.id);
    families.insert(spec.family);
    CHECK_FALSE(spec.languages.empty());
    CHECK(spec.arity > 0);
    CHECK_FALSE(spec.description.empty());
  }
  CHECK(ids.size() == cat.size());
  CHECK(families.size() == 12);
  CHECK(std::is_sorted(cat.begin(), cat.end(),
                       [](const auto& a, const auto& b) { return a.id < b.id; }));
  const auto& after_return = forge::find_pattern("after_return");
  CHECK(after_return.family == PatternFamily::kAfterReturn);
  CHECK(after_return.supports(Language::kPython));
  CHECK(after_return.supports(Language::kJava));
}

TEST_CASE("floor pattern has the floor shape") {
  const auto block = forge::instantiate("floor_compare", Language::kPython, 0);
  bool uses_floor = false;
  for (const auto& line : block.preamble_lines) {
    uses_floor |= line.find(".floor(") != std::string::npos;
  }
  CHECK(uses_floor);
  CHECK(block.guard_line.rfind("if ", 0) == 0);
  CHECK(block.guard_line.find(" < ") != std::string::npos);
}

TEST_CASE("sorted array and after assert shapes") {
  const auto sorted = forge::instantiate("sorted_array", Language::kPython, 7);
  REQUIRE(sorted.preamble_lines.size() == 1);
  CHECK(sorted.preamble_lines[0].find(" = sorted([") != std::string::npos);
  CHECK(sorted.guard_line.find("[0] > ") != std::string::npos);
  CHECK(sorted.guard_line.find("[-1]:") != std::string::npos);

  const auto asserted = forge::instantiate("after_assert", Language::kPython, 0);
  REQUIRE(asserted.preamble_lines.size() == 2);
  const auto& name = asserted.identifiers.front();
  CHECK(asserted.preamble_lines[1] == "assert " + name + " > 0");
  CHECK(asserted.guard_line == "if " + name + " < 0:");
}

TEST_CASE("instantiate is deterministic and seed-sensitive") {
  for (const auto& spec : forge::catalog()) {
    for (Language language : spec.languages) {
      const auto a = forge::instantiate(spec.id, language, 11);
      CHECK(a == forge::instantiate(spec.id, language, 11));
      std::set<std::vector<std::string>> variants;
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        variants.insert(forge::instantiate(spec.id, language, seed).all_lines());
      }
      CHECK(variants.size() > 1);
    }
  }
}

TEST_CASE("unknown pattern") {
  try {
    forge::instantiate("no_such_pattern", Language::kPython, 0);
    FAIL("expected UnknownPattern");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownPattern);
  }
}

TEST_CASE("prove_guard_false verdicts") {
  forge::DeadBlock floor_block;
  floor_block.language = Language::kPython;
  floor_block.preamble_lines = {"a = 3.7", "b = math.floor(a)"};
  floor_block.guard_line = "if a < b:";
  floor_block.body_lines = {"    c = 1"};
  CHECK(forge::prove_guard_false(floor_block));

  forge::DeadBlock live;
  live.language = Language::kPython;
  live.preamble_lines = {"x = 1"};
  live.guard_line = "if x > 0:";
  live.body_lines = {"    y = 2"};
  CHECK_FALSE(forge::prove_guard_false(live));

  forge::DeadBlock unknown = live;
  unknown.preamble_lines = {"x = input()"};
  CHECK_FALSE(forge::prove_guard_false(unknown));

  forge::DeadBlock java;
  java.language = Language::kJava;
  java.preamble_lines = {"int m = 7 % 3;"};
  java.guard_line = "if (m >= 3) {";
  java.body_lines = {"    int z = 1;", "}"};
  CHECK(forge::prove_guard_false(java));
}

TEST_CASE("insert_at places a block and shifts what follows") {
  const auto host = testing::fill_str();
  forge::DeadBlock block;
  block.language = Language::kPython;
  block.pattern_id = "squared_nonneg";
  block.preamble_lines = {"qq_1 = 4"};
  block.guard_line = "if qq_1 * qq_1 < 0:";
  block.body_lines = {"    qq_2 = 9"};
  block.identifiers = {"qq_1", "qq_2"};
  const auto points = forge::insertion_points(host);
  REQUIRE(std::find(points.begin(), points.end(), 4u) != points.end());
  const auto record = forge::insert_at(host, block, 4);
  CHECK(record.span_begin == 4);
  CHECK(record.span_end == 6);
  CHECK(record.mutated.size() == 14);
  CHECK(record.mutated.line(4).text == "  qq_1 = 4");
  CHECK(record.mutated.line(5).text == "  if qq_1 * qq_1 < 0:");
  CHECK(record.mutated.line(6).text == "    qq_2 = 9");
  CHECK(record.mutated.line(7).text == host.line(4).text);
  CHECK(record.gold_lines == std::vector<GoldLine>{{4, DeadType::kUnused},
                                                   {5, DeadType::kUnreachable},
                                                   {6, DeadType::kUnreachable}});
  CHECK(forge::strip_insertion(record) == host);
}

TEST_CASE("insertion points avoid splitting statements") {
  const auto host = split_lines(
      "def f(a,\n      b):\n    total = (a +\n             b)\n    return total\n",
      Language::kPython);
  const auto points = forge::insertion_points(host);
  CHECK(std::find(points.begin(), points.end(), 2u) == points.end());
  CHECK(std::find(points.begin(), points.end(), 4u) == points.end());
  CHECK(std::find(points.begin(), points.end(), 3u) != points.end());
  CHECK(std::find(points.begin(), points.end(), 5u) != points.end());

  const auto java = split_lines(kJavaHost, Language::kJava);
  for (std::size_t p : forge::insertion_points(java)) {
    INFO(p);
    // Never directly inside the class body.
    CHECK(p != 2);
    CHECK(p != 6);
    CHECK(p != 7);
  }
}

TEST_CASE("mutants of the corpus are safe and reversible") {
  const auto corpus = testing::clean_corpus();
  std::size_t done = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& host = corpus[i];
    for (std::uint64_t k = 0; k < 4; ++k) {
      const auto& spec = forge::catalog()[(i * 4 + k) % forge::catalog().size()];
      const auto block = forge::instantiate(spec.id, host.language(), i * 31 + k);
      CHECK(forge::prove_guard_false(block));
      CHECK(forge::names_fresh(host, block));
      const auto record = forge::insert(host, block, k);
      CHECK(forge::strip_insertion(record) == host);
      CHECK(record.span_end - record.span_begin + 1 == block.all_lines().size());
      ++done;
    }
  }
  CHECK(done >= 200);
}

TEST_CASE("fresh names are renamed around host clashes") {
  const auto block = forge::instantiate("tautology", Language::kPython, 2);
  std::string host_src = "def f(v):\n";
  for (const auto& id : block.identifiers) host_src += "    " + id + " = v\n";
  host_src += "    return v\n";
  const auto host = split_lines(host_src, Language::kPython);
  CHECK_FALSE(forge::names_fresh(host, block));
  const auto record = forge::insert(host, block, 0);
  for (std::size_t i = record.span_begin; i <= record.span_end; ++i) {
    for (const auto& id : block.identifiers) {
      CHECK_FALSE(lex::contains_word(record.mutated.line(i).text, id));
    }
  }
  CHECK(forge::strip_insertion(record) == host);
}

TEST_CASE("no insertion point") {
  const auto host = split_lines("# only a comment\n", Language::kPython);
  try {
    forge::insert(host, forge::instantiate("tautology", Language::kPython, 0), 0);
    FAIL("expected NoInsertionPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoInsertionPoint);
  }
}

TEST_CASE("split_patterns") {
  const auto split = forge::split_patterns(3, 0.5);
  CHECK(split == forge::split_patterns(3, 0.5));
  std::set<std::string> train(split.train.begin(), split.train.end());
  std::set<std::string> test(split.test.begin(), split.test.end());
  CHECK(train.size() == split.train.size());
  for (const auto& id : test) CHECK(train.count(id) == 0);
  CHECK(train.size() + test.size() == forge::catalog().size());
  CHECK(train.size() == test.size());
  std::set<PatternFamily> train_families;
  std::set<PatternFamily> test_families;
  for (const auto& id : train) train_families.insert(forge::find_pattern(id).family);
  for (const auto& id : test) test_families.insert(forge::find_pattern(id).family);
  CHECK(train_families.size() == 12);
  CHECK(test_families.size() == 12);
  bool differs = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    differs |= forge::split_patterns(seed, 0.5).train != split.train;
  }
  CHECK(differs);
}

TEST_CASE("python mutants print what their hosts print") {
  if (!python_available()) {
    MESSAGE("python3 not found; differential run skipped");
    return;
  }
  const auto host = split_lines(
      "def scale(xs, k):\n    out = []\n    for x in xs:\n        out.append(x * k)\n"
      "    return out\n\n\nprint(scale([1, 2, 3], 4))\nprint(sum(scale([5], 2)))\n",
      Language::kPython);
  for (const auto& spec : forge::catalog()) {
    INFO(spec.id);
    const auto record = forge::insert(host, forge::instantiate(spec.id, Language::kPython, 5), 5);
    const auto cmp = diffexec::compare(host, record.mutated, "python3 {file}", {""});
    CHECK(cmp.same);
    CHECK(cmp.first_difference == "");
  }
}
