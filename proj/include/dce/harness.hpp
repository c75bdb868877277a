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

#ifndef DCE_HARNESS_HPP_
#define DCE_HARNESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dce/attribution.hpp"
#include "dce/audit.hpp"
#include "dce/classifier.hpp"
#include "dce/code_model.hpp"
#include "dce/labels.hpp"
#include "dce/llm.hpp"
#include "dce/pattern_forge.hpp"

namespace dce::harness {

enum class Split { kTrain, kDev, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);

struct DatasetRecord {
  std::string id;
  Language language = Language::kPython;
  std::string code;
  SnippetLabel label = SnippetLabel::kNormal;
  std::vector<GoldLine> dead_lines;
  std::optional<std::string> pattern_id;
  Split split = Split::kTrain;

  CodeSnippet snippet() const;
  bool operator==(const DatasetRecord&) const = default;
};

struct Ratios {
  double normal = 4.0;
  double unused = 1.0;
  double unreachable = 1.0;

  // "4:1:1"
  static Ratios parse(std::string_view text);
};

struct SynthOptions {
  Ratios ratios;
  std::uint64_t seed = 0;
  forge::PatternSplit patterns;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  bool hard_negatives = true;
};

// Throws PatternLeakage when a pattern id is in both halves.
void check_pattern_leakage(const forge::PatternSplit& patterns);

// Throws PatternLeakage when a test record uses a pattern outside `test_ids`
// or a train/dev record uses one of them.
void check_dataset_leakage(const std::vector<DatasetRecord>& records,
                           const std::vector<std::string>& test_ids);

// Each corpus file yields one record of the class its position draws; the
// clean originals of mutated training files are kept as extra normal
// records. Dev records take training patterns, test records test patterns.
std::vector<DatasetRecord> synth_dataset(const std::vector<CodeSnippet>& corpus,
                                         const SynthOptions& options);

// Every host yields a clean, an injected-unused and a pattern-mutant test
// record; patterns cycle through `pattern_ids` per language.
std::vector<DatasetRecord> adversarial_split(const std::vector<CodeSnippet>& hosts,
                                             const std::vector<std::string>& pattern_ids,
                                             std::uint64_t seed);

// Inserts a fresh never-read assignment at a seeded position; returns the
// mutated snippet and the inserted line.
struct UnusedInjection {
  CodeSnippet mutated;
  std::size_t line = 0;
};
UnusedInjection inject_unused(const CodeSnippet& host, std::uint64_t seed);

enum class Mode { kFull, kNoPivot, kNoLlm, kNoAttribution };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct PipelineConfig {
  ClassifierKind classifier_kind = ClassifierKind::kHeuristic;
  // Used for heuristic and remote kinds; the fixture kind is built per
  // record from its gold lines.
  const Classifier* classifier = nullptr;
  double tau = kDefaultTau;
  double epsilon = kDefaultEpsilon;
  Mode mode = Mode::kFull;
  std::optional<double> normal_ceiling;
  llm::ChatParams chat;
  AttributionOptions attribution;
  bool timings = false;
};

std::string config_fingerprint(const PipelineConfig& config);

struct StageTimings {
  double classify_ms = 0.0;
  double attribute_ms = 0.0;
  double llm_ms = 0.0;
  double audit_ms = 0.0;
};

struct AnalysisReport {
  std::string record_id;
  CodeClass predicted_label = CodeClass::kNormal;
  std::optional<ClassProbabilities> probabilities;
  std::optional<CandidateSet> candidates;  // absent when attribution did not run
  std::string prompt;                      // "base", "hinted" or "none"
  std::optional<llm::LlmVerdict> verdict;
  // LLM findings, or in no_llm mode the candidate lines without explanations.
  std::vector<llm::Finding> findings;
  std::optional<audit::AuditReport> audit;
  std::size_t llm_calls = 0;
  std::string mode;
  std::string template_version;
  std::string config_fingerprint;
  std::optional<std::string> error;
  std::optional<StageTimings> timings;
};

// Stage failures are recorded in the report rather than thrown.
AnalysisReport run_pipeline(const DatasetRecord& record, const PipelineConfig& config,
                            const llm::Transport* transport);

// Runs records on a bounded pool; the result is sorted by record id.
std::vector<AnalysisReport> run_all(const std::vector<DatasetRecord>& records,
                                    const PipelineConfig& config,
                                    const llm::Transport* transport,
                                    std::size_t workers);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Localization {
  std::optional<double> line_recall;
  std::optional<double> mean_candidate_size;
  std::size_t gold_lines = 0;
  std::size_t hits = 0;
};

// Percentages in [0, 100].
struct Metrics {
  std::array<ClassMetrics, 3> per_class;
  std::array<std::array<std::size_t, 3>, 3> confusion{};  // [gold][predicted]
  double accuracy = 0.0;
  std::size_t total = 0;
  Localization localization;

  const ClassMetrics& operator[](CodeClass cls) const {
    return per_class[static_cast<std::size_t>(cls)];
  }
};

Metrics metrics_from_labels(const std::vector<CodeClass>& gold,
                            const std::vector<CodeClass>& predicted);

// Reports and records are matched by id; MisalignedInputs otherwise.
Metrics compute_metrics(const std::vector<AnalysisReport>& reports,
                        const std::vector<DatasetRecord>& golds);

// Oracle-as-predictor: the label the conservative analyzer alone assigns.
CodeClass oracle_prediction(const DatasetRecord& record);

}  // namespace dce::harness

#endif  // DCE_HARNESS_HPP_
