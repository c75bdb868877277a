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

#include "dce/serialize.hpp"

#include <fstream>
#include <sstream>

#include "dce/error.hpp"

namespace dce::io {
namespace {

template <typename T>
Json optional_json(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json finding_json(const llm::Finding& f) {
  Json doc;
  doc["line"] = f.line;
  doc["type"] = std::string(to_string(f.type));
  doc["explanation"] = f.explanation;
  return doc;
}

Json class_json(const harness::ClassMetrics& m) {
  Json doc;
  doc["recall"] = m.recall;
  doc["precision"] = m.precision;
  doc["f1"] = m.f1;
  doc["support"] = m.support;
  return doc;
}

std::string fixed2(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << v;
  return out.str();
}

}  // namespace

Json to_json(const harness::DatasetRecord& record) {
  Json doc;
  doc["id"] = record.id;
  doc["language"] = std::string(to_string(record.language));
  doc["code"] = record.code;
  doc["label"] = std::string(to_string(record.label));
  Json lines = Json::array();
  for (const auto& g : record.dead_lines) {
    lines.push_back(Json{{"index", g.index}, {"type", std::string(to_string(g.type))}});
  }
  doc["dead_lines"] = lines;
  doc["pattern_id"] = optional_json(record.pattern_id);
  doc["split"] = std::string(harness::to_string(record.split));
  return doc;
}

harness::DatasetRecord record_from_json(const Json& doc) {
  try {
    harness::DatasetRecord record;
    record.id = doc.at("id").get<std::string>();
    record.language = parse_language(doc.at("language").get<std::string>());
    record.code = doc.at("code").get<std::string>();
    record.label = parse_snippet_label(doc.at("label").get<std::string>());
    for (const auto& line : doc.at("dead_lines")) {
      record.dead_lines.push_back(
          {line.at("index").get<std::size_t>(), parse_dead_type(line.at("type").get<std::string>())});
    }
    if (doc.contains("pattern_id") && !doc["pattern_id"].is_null()) {
      record.pattern_id = doc["pattern_id"].get<std::string>();
    }
    record.split = harness::parse_split(doc.at("split").get<std::string>());
    return record;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed dataset record: ") + e.what());
  }
}

Json to_json(const ClassProbabilities& probs) {
  Json doc;
  doc["normal"] = probs.normal;
  doc["unused"] = probs.unused;
  doc["unreachable"] = probs.unreachable;
  return doc;
}

Json to_json(const CandidateSet& candidates) {
  Json doc;
  doc["unused_lines"] = candidates.unused_lines;
  doc["unreachable_lines"] = candidates.unreachable_lines;
  doc["tau"] = candidates.tau;
  doc["epsilon"] = candidates.epsilon;
  return doc;
}

Json to_json(const llm::LlmVerdict& verdict) {
  Json doc;
  doc["has_dead_code"] = verdict.has_dead_code;
  Json findings = Json::array();
  for (const auto& f : verdict.findings) findings.push_back(finding_json(f));
  doc["findings"] = findings;
  doc["fixed_code"] = optional_json(verdict.fixed_code);
  doc["warnings"] = verdict.warnings;
  doc["raw"] = verdict.raw;
  return doc;
}

Json to_json(const oracle::LineFinding& finding) {
  Json doc;
  doc["index"] = finding.index;
  doc["type"] = std::string(to_string(finding.type));
  doc["reason"] = std::string(oracle::to_string(finding.reason));
  return doc;
}

Json to_json(const audit::AuditReport& report) {
  Json doc;
  doc["removed_all_gold"] = optional_json(report.removed_all_gold);
  Json residual = Json::array();
  for (const auto& f : report.residual_oracle_findings) residual.push_back(to_json(f));
  doc["residual_oracle_findings"] = residual;
  doc["diff_confinement"] = report.diff_confinement;
  doc["parse_ok"] = report.parse_ok;
  doc["changed_lines"] = report.changed_lines;
  doc["added_lines"] = report.added_lines;
  return doc;
}

Json to_json(const harness::AnalysisReport& report) {
  Json doc;
  doc["record_id"] = report.record_id;
  doc["predicted_label"] = std::string(to_string(report.predicted_label));
  doc["probabilities"] = report.probabilities ? to_json(*report.probabilities) : Json(nullptr);
  doc["candidates"] = report.candidates ? to_json(*report.candidates) : Json(nullptr);
  doc["prompt"] = report.prompt;
  doc["verdict"] = report.verdict ? to_json(*report.verdict) : Json(nullptr);
  Json findings = Json::array();
  for (const auto& f : report.findings) findings.push_back(finding_json(f));
  doc["findings"] = findings;
  doc["audit"] = report.audit ? to_json(*report.audit) : Json(nullptr);
  doc["llm_calls"] = report.llm_calls;
  doc["mode"] = report.mode;
  doc["template_version"] = report.template_version;
  doc["config_fingerprint"] = report.config_fingerprint;
  doc["error"] = optional_json(report.error);
  if (report.timings) {
    doc["timings"] = Json{{"classify_ms", report.timings->classify_ms},
                          {"attribute_ms", report.timings->attribute_ms},
                          {"llm_ms", report.timings->llm_ms},
                          {"audit_ms", report.timings->audit_ms}};
  }
  return doc;
}

Json to_json(const harness::Metrics& metrics) {
  Json doc;
  Json classes;
  for (CodeClass c : {CodeClass::kUnused, CodeClass::kUnreachable, CodeClass::kNormal}) {
    classes[std::string(to_string(c))] = class_json(metrics[c]);
  }
  doc["classes"] = classes;
  doc["accuracy"] = metrics.accuracy;
  doc["total"] = metrics.total;
  Json confusion = Json::array();
  for (const auto& row : metrics.confusion) confusion.push_back(row);
  doc["confusion"] = confusion;
  doc["localization"] = Json{{"line_recall", optional_json(metrics.localization.line_recall)},
                             {"mean_candidate_size",
                              optional_json(metrics.localization.mean_candidate_size)},
                             {"gold_lines", metrics.localization.gold_lines},
                             {"hits", metrics.localization.hits}};
  return doc;
}

Json attribution_line(const AttributionScore& score, const CandidateSet& candidates) {
  Json doc;
  doc["index"] = score.index;
  doc["a_unused"] = score.a_unused;
  doc["a_unreachable"] = score.a_unreachable;
  Json selected = Json::array();
  for (DeadType type : {DeadType::kUnused, DeadType::kUnreachable}) {
    const auto& lines = candidates.lines(type);
    if (std::find(lines.begin(), lines.end(), score.index) != lines.end()) {
      selected.push_back(std::string(to_string(type)));
    }
  }
  doc["selected"] = selected;
  return doc;
}

Json catalog_json() {
  Json out = Json::array();
  for (const auto& spec : forge::catalog()) {
    Json doc;
    doc["id"] = spec.id;
    doc["family"] = std::string(forge::to_string(spec.family));
    Json languages = Json::array();
    for (auto l : spec.languages) languages.push_back(std::string(to_string(l)));
    doc["languages"] = languages;
    doc["arity"] = spec.arity;
    doc["description"] = spec.description;
    Json examples;
    for (auto l : spec.languages) {
      std::string text;
      for (const auto& line : forge::instantiate(spec.id, l, 0).all_lines()) text += line + "\n";
      examples[std::string(to_string(l))] = text;
    }
    doc["example"] = examples;
    out.push_back(doc);
  }
  return out;
}

std::string metrics_csv(const harness::Metrics& metrics, std::string_view approach) {
  std::string out =
      "approach,unused_R,unused_P,unused_F1,unreachable_R,unreachable_P,unreachable_F1,"
      "normal_R,normal_P,normal_F1,accuracy\n";
  out += std::string(approach);
  for (CodeClass c : {CodeClass::kUnused, CodeClass::kUnreachable, CodeClass::kNormal}) {
    const auto& m = metrics[c];
    out += "," + fixed2(m.recall) + "," + fixed2(m.precision) + "," + fixed2(m.f1);
  }
  out += "," + fixed2(metrics.accuracy) + "\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

std::vector<harness::DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<harness::DatasetRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  path.string() + ":" + std::to_string(number) + ": " + e.what());
    } catch (Error& e) {
      e.line = number;
      throw;
    }
  }
  return records;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& docs) {
  std::string out;
  for (const auto& doc : docs) out += doc.dump() + "\n";
  write_file(path, out);
}

}  // namespace dce::io
