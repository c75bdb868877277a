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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dce/attribution.hpp"
#include "dce/audit.hpp"
#include "dce/classifier.hpp"
#include "dce/code_model.hpp"
#include "dce/diff_exec.hpp"
#include "dce/error.hpp"
#include "dce/harness.hpp"
#include "dce/language.hpp"
#include "dce/llm.hpp"
#include "dce/oracle.hpp"
#include "dce/pattern_forge.hpp"
#include "dce/serialize.hpp"
#include "layered_config.hpp"

namespace fs = std::filesystem;
using dce::io::Json;

namespace dce::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRecordFailure = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::string config_path;
  std::string log_level = "warn";
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  bool strict = false;
};

struct PipelineFlags {
  std::string classifier = "heuristic";
  std::string endpoint;
  double tau = kDefaultTau;
  double epsilon = kDefaultEpsilon;
  std::string mode = "full";
  std::string replay;
  std::optional<double> normal_ceiling;
  bool timings = false;
  double temperature = 0.1;
  std::size_t max_tokens = 1024;
};

// Adds the classifier/pipeline flags shared by analyze and eval.
void add_pipeline_flags(CLI::App& app, PipelineFlags& flags, LayeredConfig& layers) {
  layers.bind(app.add_option("--classifier", flags.classifier,
                             "Pivot classifier: heuristic, fixture or remote")
                  ->capture_default_str(),
              "classifier");
  layers.bind(app.add_option("--endpoint", flags.endpoint,
                             "Base URL of the remote classifier service"),
              "endpoint");
  layers.bind(app.add_option("--tau", flags.tau, "Soft-threshold divisor (>= 1)")
                  ->capture_default_str(),
              "tau");
  layers.bind(app.add_option("--epsilon", flags.epsilon,
                             "Minimum attribution score a candidate needs")
                  ->capture_default_str(),
              "epsilon");
  layers.bind(app.add_option("--mode", flags.mode,
                             "Pipeline mode: full, no_pivot, no_llm or no_attribution")
                  ->capture_default_str(),
              "mode");
  layers.bind(app.add_option("--replay", flags.replay,
                             "Directory of recorded LLM responses; without it the live "
                             "transport is configured from DCE_LLM_* variables"),
              "replay");
  layers.bind(app.add_option("--normal-ceiling", flags.normal_ceiling,
                             "Predict normal only when p_normal reaches this value"),
              "normal-ceiling");
  layers.bind(app.add_flag("--timings", flags.timings, "Include per-stage durations in reports"),
              "timings");
  layers.bind(app.add_option("--temperature", flags.temperature, "LLM sampling temperature")
                  ->capture_default_str(),
              "temperature");
  layers.bind(app.add_option("--max-tokens", flags.max_tokens, "LLM completion token limit")
                  ->capture_default_str(),
              "max-tokens");
}

// Owns whatever the pipeline config points at.
struct PipelineSetup {
  harness::PipelineConfig config;
  std::unique_ptr<Classifier> classifier;
  std::unique_ptr<llm::Transport> transport;
};

std::unique_ptr<Classifier> build_classifier(ClassifierKind kind, const std::string& endpoint) {
  if (kind == ClassifierKind::kFixture) return nullptr;
  ClassifierConfig config;
  config.kind = kind;
  if (!endpoint.empty()) config.endpoint = endpoint;
  return make_classifier(config);
}

std::unique_ptr<llm::Transport> build_transport(const std::string& replay) {
  if (!replay.empty()) return std::make_unique<llm::ReplayTransport>(replay);
  return std::make_unique<llm::LiveTransport>(llm::LiveConfig::from_env());
}

PipelineSetup build_pipeline(const PipelineFlags& flags) {
  PipelineSetup setup;
  auto& config = setup.config;
  config.classifier_kind = parse_classifier_kind(flags.classifier);
  config.mode = harness::parse_mode(flags.mode);
  if (flags.tau < 1.0) throw Error(ErrorCode::kInvalidTau, "tau must be >= 1");
  if (flags.epsilon < 0.0) throw Error(ErrorCode::kInvalidConfig, "epsilon must be >= 0");
  config.tau = flags.tau;
  config.epsilon = flags.epsilon;
  config.normal_ceiling = flags.normal_ceiling;
  config.chat.temperature = flags.temperature;
  config.chat.max_tokens = flags.max_tokens;
  config.timings = flags.timings;

  if (config.mode != harness::Mode::kNoPivot) {
    setup.classifier = build_classifier(config.classifier_kind, flags.endpoint);
    config.classifier = setup.classifier.get();
  }
  if (config.mode != harness::Mode::kNoLlm) setup.transport = build_transport(flags.replay);
  return setup;
}

std::vector<CodeSnippet> load_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kIo, "corpus directory not found: " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    try {
      language_for_path(entry.path().string());
      files.push_back(entry.path());
    } catch (const Error&) {
      spdlog::debug("skipping {}", entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<CodeSnippet> corpus;
  for (const auto& file : files) {
    corpus.push_back(split_lines(io::read_file(file), language_for_path(file.string()),
                                 fs::relative(file, root).generic_string()));
  }
  return corpus;
}

// A standalone source file as a dataset record labeled by the analyzer.
harness::DatasetRecord record_for_file(const std::string& path,
                                       const std::optional<std::string>& language) {
  const Language lang = language ? parse_language(*language) : language_for_path(path);
  harness::DatasetRecord record;
  record.id = path;
  record.language = lang;
  record.code = normalize_source(io::read_file(path));
  const auto annotation = oracle::annotate(split_lines(record.code, lang, path));
  record.label = annotation.label;
  record.dead_lines = oracle::to_gold_lines(annotation.lines);
  record.split = harness::Split::kTest;
  return record;
}

void emit_lines(const std::vector<Json>& docs, const std::string& out) {
  if (out.empty() || out == "-") {
    for (const auto& doc : docs) std::cout << doc.dump() << '\n';
    std::cout.flush();
  } else {
    io::write_jsonl(out, docs);
  }
}

int report_failures(const std::vector<harness::AnalysisReport>& reports, bool strict) {
  std::size_t failed = 0;
  for (const auto& report : reports) {
    if (!report.error) continue;
    ++failed;
    spdlog::warn("{}: {}", report.record_id, *report.error);
  }
  if (failed > 0 && strict) {
    spdlog::error("{} of {} records failed", failed, reports.size());
    return kExitRecordFailure;
  }
  return kExitOk;
}

// ---- synth

struct SynthFlags {
  std::string corpus;
  std::string out;
  std::uint64_t seed = 0;
  std::string ratios = "4:1:1";
  double train_fraction = 0.5;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  bool no_hard_negatives = false;
  bool adversarial = false;
};

int run_synth(const SynthFlags& flags) {
  const auto corpus = load_corpus(flags.corpus);
  const auto patterns = forge::split_patterns(flags.seed, flags.train_fraction);
  std::vector<harness::DatasetRecord> records;
  if (flags.adversarial) {
    records = harness::adversarial_split(corpus, patterns.test, flags.seed);
  } else {
    harness::SynthOptions options;
    options.ratios = harness::Ratios::parse(flags.ratios);
    options.seed = flags.seed;
    options.patterns = patterns;
    options.dev_fraction = flags.dev_fraction;
    options.test_fraction = flags.test_fraction;
    options.hard_negatives = !flags.no_hard_negatives;
    records = harness::synth_dataset(corpus, options);
  }
  std::vector<Json> docs;
  docs.reserve(records.size());
  for (const auto& record : records) docs.push_back(io::to_json(record));
  io::write_jsonl(flags.out, docs);

  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& record : records) {
    ++counts[{std::string(harness::to_string(record.split)), std::string(to_string(record.label))}];
  }
  std::cout << "wrote " << records.size() << " records to " << flags.out << '\n';
  for (const auto& [key, count] : counts) {
    std::cout << "  " << key.first << ' ' << key.second << ": " << count << '\n';
  }
  std::cout << "  train patterns: " << patterns.train.size()
            << ", test patterns: " << patterns.test.size() << '\n';
  return kExitOk;
}

// ---- analyze

struct AnalyzeFlags {
  std::vector<std::string> files;
  std::string data;
  std::string split = "all";
  std::optional<std::string> language;
  bool oracle_only = false;
  std::string out;
  PipelineFlags pipeline;
};

std::vector<harness::DatasetRecord> select_split(std::vector<harness::DatasetRecord> records,
                                                 const std::string& split) {
  if (split == "all") return records;
  const auto wanted = harness::parse_split(split);
  std::erase_if(records, [&](const auto& r) { return r.split != wanted; });
  return records;
}

std::vector<harness::DatasetRecord> analyze_inputs(const AnalyzeFlags& flags) {
  std::vector<harness::DatasetRecord> records;
  if (!flags.data.empty()) records = select_split(io::read_dataset(flags.data), flags.split);
  for (const auto& file : flags.files) records.push_back(record_for_file(file, flags.language));
  if (records.empty()) throw CLI::ValidationError("analyze", "no input files or records");
  return records;
}

int run_oracle_only(const std::vector<harness::DatasetRecord>& records, const std::string& out) {
  std::vector<Json> docs;
  for (const auto& record : records) {
    const auto annotation = oracle::annotate(record.snippet());
    for (const auto& finding : annotation.lines) {
      Json doc;
      doc["record_id"] = record.id;
      doc["index"] = finding.index;
      doc["type"] = std::string(to_string(finding.type));
      doc["reason"] = std::string(oracle::to_string(finding.reason));
      docs.push_back(std::move(doc));
    }
  }
  emit_lines(docs, out);
  return kExitOk;
}

int run_analyze(const AnalyzeFlags& flags, const GlobalOptions& global) {
  auto records = analyze_inputs(flags);
  if (flags.oracle_only) return run_oracle_only(records, flags.out);
  auto setup = build_pipeline(flags.pipeline);
  auto reports = harness::run_all(records, setup.config, setup.transport.get(), global.workers);
  std::vector<Json> docs;
  docs.reserve(reports.size());
  for (const auto& report : reports) docs.push_back(io::to_json(report));
  emit_lines(docs, flags.out);
  return report_failures(reports, global.strict);
}

// ---- attribute

struct AttributeFlags {
  std::string file;
  std::optional<std::string> language;
  std::string classifier = "heuristic";
  std::string endpoint;
  double tau = kDefaultTau;
  double epsilon = kDefaultEpsilon;
  std::string out;
};

int run_attribute(const AttributeFlags& flags, const GlobalOptions& global) {
  const auto record = record_for_file(flags.file, flags.language);
  const CodeSnippet snippet = record.snippet();
  const auto kind = parse_classifier_kind(flags.classifier);
  std::unique_ptr<Classifier> owned = build_classifier(kind, flags.endpoint);
  std::optional<FixtureClassifier> fixture;
  const Classifier* classifier = owned.get();
  if (kind == ClassifierKind::kFixture) {
    fixture.emplace(FixtureClassifier::from_gold(snippet, record.dead_lines));
    classifier = &*fixture;
  }
  AttributionOptions options;
  options.workers = global.workers;
  const auto scores = attribute(snippet, *classifier, options);
  const auto candidates = select_candidates(scores, flags.tau, flags.epsilon);
  std::vector<Json> docs;
  for (const auto& score : scores) docs.push_back(io::attribution_line(score, candidates));
  emit_lines(docs, flags.out);
  return kExitOk;
}

// ---- eval

struct EvalFlags {
  std::string data;
  std::string split = "test";
  std::string out = "metrics.json";
  std::string csv;
  std::string reports;
  std::string approach;
  bool oracle_predictor = false;
  PipelineFlags pipeline;
};

void print_metrics(const harness::Metrics& metrics) {
  std::printf("%-12s %8s %8s %8s %8s\n", "class", "R", "P", "F1", "support");
  for (CodeClass c : {CodeClass::kUnused, CodeClass::kUnreachable, CodeClass::kNormal}) {
    const auto& m = metrics[c];
    std::printf("%-12s %8.2f %8.2f %8.2f %8zu\n", std::string(to_string(c)).c_str(), m.recall,
                m.precision, m.f1, m.support);
  }
  std::printf("accuracy %.2f over %zu records\n", metrics.accuracy, metrics.total);
  const auto& loc = metrics.localization;
  if (loc.line_recall) {
    std::printf("localization: line recall %.4f (%zu/%zu), mean candidate size %.2f\n",
                *loc.line_recall, loc.hits, loc.gold_lines, loc.mean_candidate_size.value_or(0.0));
  } else {
    std::printf("localization: n/a\n");
  }
  std::fflush(stdout);
}

int run_eval(const EvalFlags& flags, const GlobalOptions& global) {
  const auto records = select_split(io::read_dataset(flags.data), flags.split);
  if (records.empty()) throw Error(ErrorCode::kInsufficientCorpus, "no records in split " + flags.split);

  harness::Metrics metrics;
  int status = kExitOk;
  std::string approach = flags.approach;
  Json fingerprint = nullptr;
  if (flags.oracle_predictor) {
    std::vector<CodeClass> gold;
    std::vector<CodeClass> predicted;
    for (const auto& record : records) {
      gold.push_back(to_class(record.label));
      predicted.push_back(harness::oracle_prediction(record));
    }
    metrics = harness::metrics_from_labels(gold, predicted);
    if (approach.empty()) approach = "oracle";
  } else {
    auto setup = build_pipeline(flags.pipeline);
    fingerprint = harness::config_fingerprint(setup.config);
    auto reports = harness::run_all(records, setup.config, setup.transport.get(), global.workers);
    if (!flags.reports.empty()) {
      std::vector<Json> docs;
      for (const auto& report : reports) docs.push_back(io::to_json(report));
      io::write_jsonl(flags.reports, docs);
    }
    metrics = harness::compute_metrics(reports, records);
    status = report_failures(reports, global.strict);
    if (approach.empty()) approach = flags.pipeline.mode;
  }

  print_metrics(metrics);
  Json doc;
  doc["approach"] = approach;
  doc["config_fingerprint"] = fingerprint;
  doc["split"] = flags.split;
  const Json body = io::to_json(metrics);
  for (const auto& [key, value] : body.items()) doc[key] = value;
  io::write_file(flags.out, doc.dump(2) + "\n");
  if (!flags.csv.empty()) io::write_file(flags.csv, io::metrics_csv(metrics, approach));
  return status;
}

// ---- audit

struct AuditFlags {
  std::string original;
  std::string fixed;
  std::string gold;
  std::optional<std::string> language;
  std::string exec;
  std::vector<std::string> inputs;
};

// "4:unused,7:unreachable"
std::vector<GoldLine> parse_gold_spec(const std::string& text) {
  std::vector<GoldLine> gold;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--gold", "expected INDEX:TYPE, got '" + item + "'");
    }
    try {
      gold.push_back({std::stoul(item.substr(0, colon)), parse_dead_type(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--gold", "bad line index in '" + item + "'");
    }
  }
  std::sort(gold.begin(), gold.end());
  return gold;
}

int run_audit(const AuditFlags& flags) {
  const Language lang =
      flags.language ? parse_language(*flags.language) : language_for_path(flags.original);
  const CodeSnippet original = split_lines(io::read_file(flags.original), lang, flags.original);
  const std::string fixed_text = io::read_file(flags.fixed);
  std::vector<GoldLine> gold = flags.gold.empty()
                                   ? oracle::to_gold_lines(oracle::annotate(original).lines)
                                   : parse_gold_spec(flags.gold);
  const auto report = audit::audit(original, gold, fixed_text);
  Json doc = io::to_json(report);
  if (!flags.exec.empty()) {
    std::vector<std::string> inputs;
    for (const auto& path : flags.inputs) inputs.push_back(io::read_file(path));
    if (inputs.empty()) inputs.emplace_back();
    const auto cmp = diffexec::compare(original, split_lines(fixed_text, lang), flags.exec, inputs);
    doc["differential"] = Json{{"same", cmp.same},
                               {"runs", cmp.runs},
                               {"first_difference", cmp.first_difference}};
  }
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

// ---- patterns

int run_patterns(bool as_json) {
  if (as_json) {
    std::cout << io::catalog_json().dump(2) << '\n';
    return kExitOk;
  }
  std::printf("%-24s %-20s %-13s %5s  %s\n", "id", "family", "languages", "arity", "description");
  for (const auto& spec : forge::catalog()) {
    std::string languages;
    for (auto l : spec.languages) {
      if (!languages.empty()) languages += ",";
      languages += to_string(l);
    }
    std::printf("%-24s %-20s %-13s %5d  %s\n", spec.id.c_str(),
                std::string(forge::to_string(spec.family)).c_str(), languages.c_str(), spec.arity,
                spec.description.c_str());
  }
  return kExitOk;
}

void configure_logging(const std::string& level) {
  auto logger = spdlog::stderr_color_mt("dce");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  const auto parsed = spdlog::level::from_str(level);
  if (parsed == spdlog::level::off && level != "off") {
    throw Error(ErrorCode::kInvalidConfig, "unknown log level " + level);
  }
  spdlog::set_level(parsed);
}

int run(int argc, char** argv) {
  CLI::App app{"Dead code detection and elimination toolkit", "dce"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dce 0.1.0");
  LayeredConfig layers;
  GlobalOptions global;

  app.add_option("--config", global.config_path,
                 "TOML/INI file supplying defaults for any option")
      ->envname("DCE_CONFIG");
  layers.bind(app.add_option("--log-level", global.log_level,
                             "trace, debug, info, warn, error or off")
                  ->capture_default_str(),
              "log-level");
  layers.bind(app.add_option("--workers", global.workers, "Worker threads (default: logical cores)")
                  ->check(CLI::PositiveNumber),
              "workers");
  layers.bind(app.add_flag("--strict", global.strict,
                           "Exit with status 1 when any record fails"),
              "strict");

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Build a labeled dataset from a clean corpus");
  synth_cmd->add_option("--corpus", synth.corpus, "Directory of .py/.java source files")
      ->required();
  synth_cmd->add_option("--out", synth.out, "Dataset JSONL to write")->required();
  layers.bind(synth_cmd->add_option("--seed", synth.seed, "Dataset seed")->capture_default_str(),
              "seed");
  layers.bind(synth_cmd->add_option("--ratios", synth.ratios, "normal:unused:unreachable ratios")
                  ->capture_default_str(),
              "ratios");
  layers.bind(synth_cmd->add_option("--train-fraction", synth.train_fraction,
                                    "Share of each pattern family reserved for training")
                  ->capture_default_str(),
              "train-fraction");
  layers.bind(synth_cmd->add_option("--dev-fraction", synth.dev_fraction, "Dev share of records")
                  ->capture_default_str(),
              "dev-fraction");
  layers.bind(synth_cmd->add_option("--test-fraction", synth.test_fraction,
                                    "Test share of records")
                  ->capture_default_str(),
              "test-fraction");
  synth_cmd->add_flag("--no-hard-negatives", synth.no_hard_negatives,
                      "Do not keep clean hosts of mutated training files");
  synth_cmd->add_flag("--adversarial", synth.adversarial,
                      "Emit the adversarial test split (clean, unused and mutant per host)");

  AnalyzeFlags analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the pipeline on files or dataset records");
  analyze_cmd->add_option("files", analyze.files, "Source files")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--data", analyze.data, "Dataset JSONL")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--split", analyze.split, "train, dev, test or all")
      ->capture_default_str();
  analyze_cmd->add_option("--language", analyze.language,
                          "Language of the files (default: from extension)");
  analyze_cmd->add_flag("--oracle-only", analyze.oracle_only,
                        "Only print the static analyzer's line findings");
  analyze_cmd->add_option("--out", analyze.out, "Report JSONL to write (default: stdout)");
  add_pipeline_flags(*analyze_cmd, analyze.pipeline, layers);

  AttributeFlags attr;
  auto* attribute_cmd = app.add_subcommand("attribute", "Print per-line attribution scores");
  attribute_cmd->add_option("file", attr.file, "Source file")
      ->required()
      ->check(CLI::ExistingFile);
  attribute_cmd->add_option("--language", attr.language,
                            "Language of the file (default: from extension)");
  layers.bind(attribute_cmd
                  ->add_option("--classifier", attr.classifier,
                               "Pivot classifier: heuristic, fixture or remote")
                  ->capture_default_str(),
              "classifier");
  layers.bind(attribute_cmd->add_option("--endpoint", attr.endpoint,
                                        "Base URL of the remote classifier service"),
              "endpoint");
  layers.bind(attribute_cmd->add_option("--tau", attr.tau, "Soft-threshold divisor (>= 1)")
                  ->capture_default_str(),
              "tau");
  layers.bind(attribute_cmd
                  ->add_option("--epsilon", attr.epsilon,
                               "Minimum attribution score a candidate needs")
                  ->capture_default_str(),
              "epsilon");
  attribute_cmd->add_option("--out", attr.out, "JSONL to write (default: stdout)");

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute classification and localization metrics");
  eval_cmd->add_option("--data", eval.data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", eval.split, "train, dev, test or all")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Metrics JSON to write")->capture_default_str();
  eval_cmd->add_option("--csv", eval.csv, "Also write a one-row metrics table as CSV");
  eval_cmd->add_option("--reports", eval.reports, "Also write the per-record reports as JSONL");
  eval_cmd->add_option("--approach", eval.approach,
                       "Row name in the CSV table (default: the mode)");
  eval_cmd->add_flag("--oracle-predictor", eval.oracle_predictor,
                     "Score the static analyzer alone instead of the pipeline");
  add_pipeline_flags(*eval_cmd, eval.pipeline, layers);

  AuditFlags audit_flags;
  auto* audit_cmd = app.add_subcommand("audit", "Check a proposed fix against the original");
  audit_cmd->add_option("--original", audit_flags.original, "Original source file")
      ->required()
      ->check(CLI::ExistingFile);
  audit_cmd->add_option("--fixed", audit_flags.fixed, "Fixed source file")
      ->required()
      ->check(CLI::ExistingFile);
  audit_cmd->add_option("--gold", audit_flags.gold,
                        "Dead lines as INDEX:TYPE,... (default: analyzer findings)");
  audit_cmd->add_option("--language", audit_flags.language,
                        "Language of the files (default: from extension)");
  audit_cmd->add_option("--exec", audit_flags.exec,
                        "Interpreter command containing {file}, e.g. \"python3 {file}\"");
  audit_cmd->add_option("--input", audit_flags.inputs, "Stdin file for differential runs")
      ->check(CLI::ExistingFile);

  bool patterns_json = false;
  auto* patterns_cmd = app.add_subcommand("patterns", "List the unreachable-pattern catalog");
  patterns_cmd->add_flag("--json", patterns_json, "Print the catalog as JSON with examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!global.config_path.empty()) layers.load_file(global.config_path);
    layers.resolve(app);
    layers.resolve(*sub);
    configure_logging(global.log_level);

    if (sub == synth_cmd) return run_synth(synth);
    if (sub == analyze_cmd) return run_analyze(analyze, global);
    if (sub == attribute_cmd) return run_attribute(attr, global);
    if (sub == eval_cmd) return run_eval(eval, global);
    if (sub == audit_cmd) return run_audit(audit_flags);
    return run_patterns(patterns_json);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n' << sub->help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kInvalidConfig:
      case ErrorCode::kInvalidTau:
      case ErrorCode::kUnknownLanguage:
      case ErrorCode::kTransportUnavailable:
        return kExitUsage;
      default:
        return kExitRecordFailure;
    }
  }
}

}  // namespace
}  // namespace dce::cli

int main(int argc, char** argv) {
  try {
    return dce::cli::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
