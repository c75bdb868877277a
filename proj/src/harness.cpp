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

#include "dce/harness.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <map>
#include <set>
#include <thread>

#include "dce/error.hpp"
#include "dce/hash.hpp"
#include "dce/lexer.hpp"
#include "dce/oracle.hpp"

namespace dce::harness {
namespace {

const std::vector<std::string> kUnusedNames{"tmp",   "buffer", "result", "count", "total",
                                            "offset", "flag",  "temp",   "value", "limit"};

std::string record_base(const CodeSnippet& snippet, std::size_t position) {
  if (snippet.origin_id()) return *snippet.origin_id();
  return "snippet-" + std::to_string(position);
}

DatasetRecord make_record(std::string id, const CodeSnippet& snippet,
                          const std::vector<oracle::LineFinding>& lines, Split split) {
  DatasetRecord record;
  record.id = std::move(id);
  record.language = snippet.language();
  record.code = render(snippet);
  record.label = oracle::label_for(lines);
  record.dead_lines = oracle::to_gold_lines(lines);
  record.split = split;
  return record;
}

DatasetRecord unused_record(std::string id, const CodeSnippet& host, std::uint64_t seed,
                            Split split) {
  auto injection = inject_unused(host, seed);
  return make_record(std::move(id), injection.mutated, oracle::annotate(injection.mutated).lines,
                     split);
}

DatasetRecord mutant_record(std::string id, const CodeSnippet& host,
                            const std::vector<std::string>& pattern_ids, std::size_t turn,
                            std::uint64_t seed, Split split) {
  std::vector<std::string> usable;
  for (const auto& pid : pattern_ids) {
    if (forge::find_pattern(pid).supports(host.language())) usable.push_back(pid);
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kInsufficientCorpus,
                "no pattern in the split supports " + std::string(to_string(host.language())));
  }
  const std::string& pid = usable[turn % usable.size()];
  auto block = forge::instantiate(pid, host.language(), seed);
  auto insertion = forge::insert(host, block, seed);
  auto annotation = oracle::annotate(insertion.mutated, &insertion);
  DatasetRecord record = make_record(std::move(id), insertion.mutated, annotation.lines, split);
  record.pattern_id = pid;
  return record;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

CodeClass label_from_verdict(const llm::LlmVerdict& verdict, CodeClass fallback) {
  if (!verdict.has_dead_code) return CodeClass::kNormal;
  bool unused = false;
  bool unreachable = false;
  for (const auto& f : verdict.findings) {
    (f.type == DeadType::kUnused ? unused : unreachable) = true;
  }
  if (unreachable) return CodeClass::kUnreachable;
  if (unused) return CodeClass::kUnused;
  return fallback == CodeClass::kNormal ? CodeClass::kUnreachable : fallback;
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "unknown";
}

Split parse_split(std::string_view text) {
  for (auto s : {Split::kTrain, Split::kDev, Split::kTest}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown split: " + std::string(text));
}

CodeSnippet DatasetRecord::snippet() const { return split_lines(code, language, id); }

Ratios Ratios::parse(std::string_view text) {
  std::vector<double> parts;
  std::string current;
  auto flush = [&] {
    try {
      std::size_t used = 0;
      double v = std::stod(current, &used);
      if (used != current.size()) throw std::invalid_argument(current);
      parts.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "bad ratio component: '" + current + "'");
    }
    current.clear();
  };
  for (char c : text) {
    if (c == ':') {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  if (parts.size() != 3) throw Error(ErrorCode::kInvalidConfig, "ratios take the form N:U:R");
  return {parts[0], parts[1], parts[2]};
}

void check_pattern_leakage(const forge::PatternSplit& patterns) {
  std::set<std::string> train(patterns.train.begin(), patterns.train.end());
  for (const auto& id : patterns.test) {
    if (train.count(id)) {
      throw Error(ErrorCode::kPatternLeakage, "pattern '" + id + "' is in both train and test");
    }
  }
}

void check_dataset_leakage(const std::vector<DatasetRecord>& records,
                           const std::vector<std::string>& test_ids) {
  std::set<std::string> test(test_ids.begin(), test_ids.end());
  for (const auto& r : records) {
    if (!r.pattern_id) continue;
    bool in_test = test.count(*r.pattern_id) > 0;
    if ((r.split == Split::kTest) != in_test) {
      throw Error(ErrorCode::kPatternLeakage, "record " + r.id + " (" +
                                                  std::string(to_string(r.split)) +
                                                  ") uses pattern " + *r.pattern_id);
    }
  }
}

UnusedInjection inject_unused(const CodeSnippet& host, std::uint64_t seed) {
  auto points = forge::insertion_points(host);
  SeededRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  rng.shuffle(points);
  std::set<std::string> taken;
  for (const auto& s : lex::scrub_lines(host.texts(), host.language())) {
    for (const auto& token : lex::identifiers(s)) taken.insert(token.text);
  }
  std::string name = kUnusedNames[rng.index(kUnusedNames.size())];
  for (int k = 2; taken.count(name); ++k) name = kUnusedNames[rng.index(kUnusedNames.size())] + std::to_string(k);
  std::string value = std::to_string(rng.uniform(0, 99));

  for (std::size_t p : points) {
    std::string line(lex::leading_whitespace(host.line(p).text));
    line += host.language() == Language::kPython ? name + " = " + value
                                                 : "int " + name + " = " + value + ";";
    auto mutated = insert_line(host, p, line);
    auto found = oracle::find_unused(mutated);
    bool flagged = std::any_of(found.begin(), found.end(),
                               [p](const oracle::LineFinding& f) { return f.index == p; });
    if (flagged) return {std::move(mutated), p};
  }
  throw Error(ErrorCode::kNoInsertionPoint,
              "no position for an unused assignment in " + host.origin_id().value_or("snippet"));
}

std::vector<DatasetRecord> synth_dataset(const std::vector<CodeSnippet>& corpus,
                                         const SynthOptions& options) {
  check_pattern_leakage(options.patterns);
  const Ratios& r = options.ratios;
  if (!(r.normal > 0 && r.unused > 0 && r.unreachable > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "ratios must be positive");
  }
  if (corpus.empty()) throw Error(ErrorCode::kInsufficientCorpus, "empty corpus");
  if (options.patterns.train.empty() || options.patterns.test.empty()) {
    throw Error(ErrorCode::kInsufficientCorpus, "both pattern splits need at least one pattern");
  }

  std::vector<DatasetRecord> records;
  std::vector<std::size_t> clean;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    auto annotation = oracle::annotate(corpus[k]);
    if (annotation.label == SnippetLabel::kNormal) {
      clean.push_back(k);
      continue;
    }
    // Naturally dead files keep their own label; they go to training.
    records.push_back(make_record(record_base(corpus[k], k) + "#natural", corpus[k],
                                  annotation.lines, Split::kTrain));
  }
  SeededRng rng(fnv1a64("synth/" + std::to_string(options.seed)));
  rng.shuffle(clean);

  double total = r.normal + r.unused + r.unreachable;
  auto n = static_cast<double>(clean.size());
  auto unused_count = static_cast<std::size_t>(std::lround(n * r.unused / total));
  auto unreachable_count = static_cast<std::size_t>(std::lround(n * r.unreachable / total));
  if (unused_count == 0 || unreachable_count == 0 ||
      unused_count + unreachable_count >= clean.size()) {
    throw Error(ErrorCode::kInsufficientCorpus,
                std::to_string(clean.size()) + " clean files cannot meet the requested ratios");
  }

  enum class Kind { kNormal, kUnused, kUnreachable };
  std::map<Kind, std::vector<std::size_t>> by_kind;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    Kind kind = k < unused_count                       ? Kind::kUnused
                : k < unused_count + unreachable_count ? Kind::kUnreachable
                                                       : Kind::kNormal;
    by_kind[kind].push_back(clean[k]);
  }

  for (auto& [kind, files] : by_kind) {
    auto m = static_cast<double>(files.size());
    auto dev = static_cast<std::size_t>(std::lround(m * options.dev_fraction));
    auto test = static_cast<std::size_t>(std::lround(m * options.test_fraction));
    std::size_t turn = 0;
    for (std::size_t pos = 0; pos < files.size(); ++pos) {
      Split split = pos < test ? Split::kTest : pos < test + dev ? Split::kDev : Split::kTrain;
      const CodeSnippet& host = corpus[files[pos]];
      std::string base = record_base(host, files[pos]);
      std::uint64_t seed = fnv1a64(base + "/" + std::to_string(options.seed));
      switch (kind) {
        case Kind::kNormal:
          records.push_back(make_record(base + "#normal", host, {}, split));
          continue;
        case Kind::kUnused:
          records.push_back(unused_record(base + "#unused", host, seed, split));
          break;
        case Kind::kUnreachable: {
          const auto& ids = split == Split::kTest ? options.patterns.test : options.patterns.train;
          records.push_back(mutant_record(base + "#unreachable", host, ids, turn++, seed, split));
          break;
        }
      }
      if (split == Split::kTrain && options.hard_negatives) {
        records.push_back(make_record(base + "#clean", host, {}, Split::kTrain));
      }
    }
  }
  std::sort(records.begin(), records.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.id < b.id; });
  check_dataset_leakage(records, options.patterns.test);
  return records;
}

std::vector<DatasetRecord> adversarial_split(const std::vector<CodeSnippet>& hosts,
                                             const std::vector<std::string>& pattern_ids,
                                             std::uint64_t seed) {
  if (hosts.empty() || pattern_ids.empty()) {
    throw Error(ErrorCode::kInsufficientCorpus, "adversarial split needs hosts and patterns");
  }
  std::vector<DatasetRecord> records;
  std::map<Language, std::size_t> turns;
  for (std::size_t k = 0; k < hosts.size(); ++k) {
    const CodeSnippet& host = hosts[k];
    std::string base = record_base(host, k);
    std::uint64_t s = fnv1a64(base + "/" + std::to_string(seed));
    records.push_back(make_record(base + "#normal", host, {}, Split::kTest));
    records.push_back(unused_record(base + "#unused", host, s, Split::kTest));
    records.push_back(mutant_record(base + "#unreachable", host, pattern_ids,
                                    turns[host.language()]++, s, Split::kTest));
  }
  std::sort(records.begin(), records.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.id < b.id; });
  return records;
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kFull: return "full";
    case Mode::kNoPivot: return "no_pivot";
    case Mode::kNoLlm: return "no_llm";
    case Mode::kNoAttribution: return "no_attribution";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  for (auto m : {Mode::kFull, Mode::kNoPivot, Mode::kNoLlm, Mode::kNoAttribution}) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown mode: " + std::string(text));
}

std::string config_fingerprint(const PipelineConfig& config) {
  nlohmann::ordered_json doc;
  doc["classifier"] = std::string(to_string(config.classifier_kind));
  doc["tau"] = config.tau;
  doc["epsilon"] = config.epsilon;
  doc["template_version"] = std::string(llm::kTemplateVersion);
  doc["mode"] = std::string(to_string(config.mode));
  doc["normal_ceiling"] = config.normal_ceiling ? nlohmann::ordered_json(*config.normal_ceiling)
                                                : nlohmann::ordered_json(nullptr);
  doc["temperature"] = config.chat.temperature;
  doc["max_tokens"] = config.chat.max_tokens;
  doc["mask_token"] = config.attribution.mask_token;
  doc["window"] = config.attribution.window;
  return sha256_hex(doc.dump()).substr(0, 16);
}

AnalysisReport run_pipeline(const DatasetRecord& record, const PipelineConfig& config,
                            const llm::Transport* transport) {
  using Clock = std::chrono::steady_clock;
  AnalysisReport report;
  report.record_id = record.id;
  report.mode = std::string(to_string(config.mode));
  report.template_version = std::string(llm::kTemplateVersion);
  report.config_fingerprint = config_fingerprint(config);
  report.prompt = "none";
  StageTimings timings;

  try {
    const CodeSnippet snippet = record.snippet();
    std::optional<FixtureClassifier> fixture;
    const Classifier* classifier = config.classifier;
    if (config.classifier_kind == ClassifierKind::kFixture) {
      fixture.emplace(FixtureClassifier::from_gold(snippet, record.dead_lines));
      classifier = &*fixture;
    }

    CodeClass pivot = CodeClass::kUnreachable;
    if (config.mode != Mode::kNoPivot) {
      if (classifier == nullptr) throw Error(ErrorCode::kInvalidConfig, "no classifier configured");
      auto start = Clock::now();
      report.probabilities = classifier->classify(snippet);
      timings.classify_ms = elapsed_ms(start);
      pivot = decide(*report.probabilities, config.normal_ceiling);
      report.predicted_label = pivot;
      if (pivot == CodeClass::kNormal) {
        if (config.timings) report.timings = timings;
        return report;
      }
    }

    bool attributes = config.mode == Mode::kFull || config.mode == Mode::kNoLlm;
    if (attributes) {
      auto start = Clock::now();
      auto scores = attribute(snippet, *classifier, config.attribution);
      report.candidates = select_candidates(scores, config.tau, config.epsilon);
      timings.attribute_ms = elapsed_ms(start);
    }

    if (config.mode == Mode::kNoLlm) {
      for (DeadType type : {DeadType::kUnused, DeadType::kUnreachable}) {
        for (std::size_t line : report.candidates->lines(type)) {
          report.findings.push_back({line, type, ""});
        }
      }
      std::sort(report.findings.begin(), report.findings.end(),
                [](const llm::Finding& a, const llm::Finding& b) {
                  return std::tie(a.line, a.type) < std::tie(b.line, b.type);
                });
      if (config.timings) report.timings = timings;
      return report;
    }

    if (transport == nullptr) throw Error(ErrorCode::kTransportUnavailable, "no LLM transport");
    llm::PromptMessages messages;
    if (config.mode == Mode::kFull) {
      messages = llm::build_hinted_prompt(snippet, *report.candidates);
      report.prompt = "hinted";
    } else {
      messages = llm::build_base_prompt(snippet);
      report.prompt = "base";
    }
    auto start = Clock::now();
    auto exchange = llm::ask(*transport, messages, config.chat, snippet.size());
    timings.llm_ms = elapsed_ms(start);
    report.llm_calls = exchange.calls;
    report.findings = exchange.verdict.findings;
    report.predicted_label = label_from_verdict(exchange.verdict, pivot);
    report.verdict = std::move(exchange.verdict);

    if (report.verdict->fixed_code) {
      start = Clock::now();
      std::optional<std::vector<GoldLine>> gold;
      if (!record.dead_lines.empty()) gold = record.dead_lines;
      report.audit = audit::audit(snippet, gold, *report.verdict->fixed_code);
      timings.audit_ms = elapsed_ms(start);
    }
  } catch (const Error& e) {
    report.error = e.what();
    spdlog::warn("record {}: {}", record.id, e.what());
  }
  if (config.timings) report.timings = timings;
  return report;
}

std::vector<AnalysisReport> run_all(const std::vector<DatasetRecord>& records,
                                    const PipelineConfig& config,
                                    const llm::Transport* transport, std::size_t workers) {
  std::vector<AnalysisReport> reports(records.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      reports[i] = run_pipeline(records[i], config, transport);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, records.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  std::sort(reports.begin(), reports.end(),
            [](const AnalysisReport& a, const AnalysisReport& b) { return a.record_id < b.record_id; });
  return reports;
}

Metrics metrics_from_labels(const std::vector<CodeClass>& gold,
                            const std::vector<CodeClass>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kMisalignedInputs, "label vectors differ in length");
  }
  Metrics m;
  m.total = gold.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = static_cast<std::size_t>(gold[i]);
    auto p = static_cast<std::size_t>(predicted[i]);
    ++m.confusion[g][p];
    if (g == p) ++correct;
  }
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t tp = m.confusion[c][c];
    std::size_t predicted_c = 0;
    std::size_t actual_c = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      predicted_c += m.confusion[k][c];
      actual_c += m.confusion[c][k];
    }
    ClassMetrics& cm = m.per_class[c];
    cm.support = actual_c;
    cm.precision = predicted_c == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(predicted_c);
    cm.recall = actual_c == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(actual_c);
    double sum = cm.precision + cm.recall;
    cm.f1 = sum == 0.0 ? 0.0 : 2.0 * cm.precision * cm.recall / sum;
  }
  m.accuracy = m.total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(m.total);
  return m;
}

Metrics compute_metrics(const std::vector<AnalysisReport>& reports,
                        const std::vector<DatasetRecord>& golds) {
  if (reports.size() != golds.size()) {
    throw Error(ErrorCode::kMisalignedInputs, std::to_string(reports.size()) + " reports for " +
                                                  std::to_string(golds.size()) + " records");
  }
  std::map<std::string, const DatasetRecord*> by_id;
  for (const auto& g : golds) by_id[g.id] = &g;
  if (by_id.size() != golds.size()) throw Error(ErrorCode::kMisalignedInputs, "duplicate record id");

  std::vector<CodeClass> gold_labels;
  std::vector<CodeClass> predicted;
  Localization loc;
  bool attributed = false;
  std::size_t lists = 0;
  std::size_t listed = 0;
  std::set<std::string> seen;
  for (const auto& r : reports) {
    auto it = by_id.find(r.record_id);
    if (it == by_id.end()) throw Error(ErrorCode::kMisalignedInputs, "no record " + r.record_id);
    if (!seen.insert(r.record_id).second) {
      throw Error(ErrorCode::kMisalignedInputs, "two reports for " + r.record_id);
    }
    const DatasetRecord& record = *it->second;
    gold_labels.push_back(to_class(record.label));
    predicted.push_back(r.predicted_label);
    if (r.candidates) {
      attributed = true;
      for (DeadType type : {DeadType::kUnused, DeadType::kUnreachable}) {
        std::size_t size = r.candidates->lines(type).size();
        if (size > 0) {
          ++lists;
          listed += size;
        }
      }
    }
    if (record.dead_lines.empty()) continue;
    const CodeSnippet snippet = record.snippet();
    for (const auto& g : record.dead_lines) {
      if (!eligible(snippet.line(g.index))) continue;
      ++loc.gold_lines;
      if (!r.candidates) continue;
      const auto& lines = r.candidates->lines(g.type);
      if (std::find(lines.begin(), lines.end(), g.index) != lines.end()) ++loc.hits;
    }
  }
  Metrics m = metrics_from_labels(gold_labels, predicted);
  if (attributed && loc.gold_lines > 0) {
    loc.line_recall = static_cast<double>(loc.hits) / static_cast<double>(loc.gold_lines);
  }
  if (lists > 0) loc.mean_candidate_size = static_cast<double>(listed) / static_cast<double>(lists);
  m.localization = loc;
  return m;
}

CodeClass oracle_prediction(const DatasetRecord& record) {
  return to_class(oracle::annotate(record.snippet()).label);
}

}  // namespace dce::harness
