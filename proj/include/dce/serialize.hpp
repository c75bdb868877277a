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

#ifndef DCE_SERIALIZE_HPP_
#define DCE_SERIALIZE_HPP_

#include <filesystem>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "dce/attribution.hpp"
#include "dce/harness.hpp"
#include "dce/oracle.hpp"
#include "dce/pattern_forge.hpp"

// JSON encodings for every file format the tools read or write. Objects
// keep a fixed field order so output is byte-stable.
namespace dce::io {

using Json = nlohmann::ordered_json;

Json to_json(const harness::DatasetRecord& record);
harness::DatasetRecord record_from_json(const Json& doc);

Json to_json(const harness::AnalysisReport& report);
Json to_json(const harness::Metrics& metrics);
Json to_json(const ClassProbabilities& probs);
Json to_json(const CandidateSet& candidates);
Json to_json(const llm::LlmVerdict& verdict);
Json to_json(const audit::AuditReport& report);
Json to_json(const oracle::LineFinding& finding);

// One attribution output line: index, scores and the classes selecting it.
Json attribution_line(const AttributionScore& score, const CandidateSet& candidates);

// Catalog entries with a seed-0 example instantiation.
Json catalog_json();

// Table layout: R/P/F1 for unused, unreachable, normal, then accuracy.
std::string metrics_csv(const harness::Metrics& metrics, std::string_view approach);

std::vector<harness::DatasetRecord> read_dataset(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& docs);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dce::io

#endif  // DCE_SERIALIZE_HPP_
