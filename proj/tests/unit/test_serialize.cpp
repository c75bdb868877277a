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

#include <filesystem>

#include "dce/error.hpp"
#include "dce/serialize.hpp"
#include "test_support.hpp"

using namespace dce;
using io::Json;

namespace {

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "dce_serialize_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("dataset records round-trip through JSONL") {
  harness::SynthOptions options;
  options.seed = 4;
  options.patterns = forge::split_patterns(4, 0.5);
  const auto records = harness::synth_dataset(testing::clean_corpus(), options);
  std::vector<Json> docs;
  for (const auto& r : records) docs.push_back(io::to_json(r));
  const auto path = scratch("records.jsonl");
  io::write_jsonl(path, docs);
  CHECK(io::read_dataset(path) == records);
  const auto first = io::read_file(path);
  io::write_jsonl(path, docs);
  CHECK(io::read_file(path) == first);
}

TEST_CASE("record field order is fixed") {
  harness::DatasetRecord r;
  r.id = "x";
  r.code = "a = 1\n";
  r.label = SnippetLabel::kUnused;
  r.dead_lines = {{1, DeadType::kUnused}};
  CHECK(io::to_json(r).dump() ==
        R"({"id":"x","language":"python","code":"a = 1\n","label":"unused",)"
        R"("dead_lines":[{"index":1,"type":"unused"}],"pattern_id":null,"split":"train"})");
}

TEST_CASE("malformed dataset lines are located") {
  const auto path = scratch("bad.jsonl");
  io::write_file(path, R"({"id":"a","language":"python","code":"x\n","label":"normal","dead_lines":[],"split":"test"})"
                       "\n\n{\"id\": \"b\"}\n");
  try {
    io::read_dataset(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidConfig);
    REQUIRE(e.line.has_value());
    CHECK(*e.line == 3);
  }
  io::write_file(path, "{oops\n");
  CHECK_THROWS_AS(io::read_dataset(path), Error);
  CHECK_THROWS_AS(io::read_file(scratch("missing.jsonl")), Error);
}

TEST_CASE("analysis report encoding") {
  harness::AnalysisReport report;
  report.record_id = "r1";
  report.predicted_label = CodeClass::kUnused;
  report.probabilities = ClassProbabilities{0.25, 0.5, 0.25};
  report.candidates = CandidateSet{{4}, {}, 2.0, 0.02};
  report.prompt = "hinted";
  report.findings = {{4, DeadType::kUnused, "never read"}};
  report.mode = "full";
  report.template_version = "v1";
  report.config_fingerprint = "0123456789abcdef";
  const auto doc = io::to_json(report);
  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"record_id", "predicted_label", "probabilities",
                                         "candidates", "prompt", "verdict", "findings", "audit",
                                         "llm_calls", "mode", "template_version",
                                         "config_fingerprint", "error"});
  CHECK(doc["candidates"].dump() ==
        R"({"unused_lines":[4],"unreachable_lines":[],"tau":2.0,"epsilon":0.02})");
  CHECK(doc["verdict"].is_null());
  report.timings = harness::StageTimings{};
  CHECK(io::to_json(report).contains("timings"));
}

TEST_CASE("metrics JSON and CSV") {
  const auto m = harness::metrics_from_labels(
      {CodeClass::kUnused, CodeClass::kUnreachable, CodeClass::kNormal, CodeClass::kNormal},
      {CodeClass::kUnused, CodeClass::kNormal, CodeClass::kNormal, CodeClass::kNormal});
  const auto doc = io::to_json(m);
  CHECK(doc["accuracy"] == 75.0);
  CHECK(doc["classes"]["unused"]["f1"] == 100.0);
  CHECK(doc["classes"]["unreachable"]["recall"] == 0.0);
  CHECK(doc["confusion"][2][0] == 1);
  CHECK(doc["localization"]["line_recall"].is_null());
  CHECK(io::metrics_csv(m, "oracle") ==
        "approach,unused_R,unused_P,unused_F1,unreachable_R,unreachable_P,unreachable_F1,"
        "normal_R,normal_P,normal_F1,accuracy\n"
        "oracle,100.00,100.00,100.00,0.00,0.00,0.00,100.00,66.67,80.00,75.00\n");
}

TEST_CASE("attribution lines and catalog") {
  const CandidateSet c{{4}, {4, 5}, 2.0, 0.02};
  CHECK(io::attribution_line({4, 0.5, 0.25}, c).dump() ==
        R"({"index":4,"a_unused":0.5,"a_unreachable":0.25,"selected":["unused","unreachable"]})");
  CHECK(io::attribution_line({1, 0.0, 0.0}, c)["selected"].empty());
  const auto catalog = io::catalog_json();
  CHECK(catalog.size() == forge::catalog().size());
  CHECK(catalog[0]["example"].contains("python"));
}
