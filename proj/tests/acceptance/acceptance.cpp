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

// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero when any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dce/attribution.hpp"
#include "dce/classifier.hpp"
#include "dce/code_model.hpp"
#include "dce/error.hpp"
#include "dce/harness.hpp"
#include "dce/hash.hpp"
#include "dce/oracle.hpp"
#include "dce/pattern_forge.hpp"
#include "test_support.hpp"

namespace {

using namespace dce;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  std::array<char, 512> buffer{};
  std::snprintf(buffer.data(), buffer.size(), format, args...);
  return buffer.data();
}

// Leave-one-out over raw line texts, written without attribute().
std::vector<AttributionScore> brute_force(const CodeSnippet& snippet, const Classifier& model) {
  const auto texts = snippet.texts();
  const auto base = model.classify(from_line_texts(texts, snippet.language()));
  std::vector<AttributionScore> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    AttributionScore s{i + 1, 0.0, 0.0};
    const LineKind kind = classify_line_kind(texts[i], snippet.language());
    std::vector<std::string> changed = texts;
    if (kind == LineKind::kStatement && texts.size() > 1) {
      changed.erase(changed.begin() + static_cast<std::ptrdiff_t>(i));
    } else if (kind == LineKind::kCondition) {
      changed[i] = mask_guard(texts[i], snippet.language(), "<mask>");
    } else {
      out.push_back(s);
      continue;
    }
    const auto p = model.classify(from_line_texts(changed, snippet.language()));
    s.a_unused = std::min(1.0, std::max(0.0, base.unused - p.unused));
    s.a_unreachable = std::min(1.0, std::max(0.0, base.unreachable - p.unreachable));
    out.push_back(s);
  }
  return out;
}

std::vector<harness::DatasetRecord> desk_dataset(std::uint64_t seed) {
  harness::SynthOptions options;
  options.seed = seed;
  options.patterns = forge::split_patterns(seed, 0.5);
  return harness::synth_dataset(testing::clean_corpus(), options);
}

Outcome attribution_equivalence() {
  std::vector<std::pair<CodeSnippet, std::vector<GoldLine>>> snippets;
  snippets.emplace_back(testing::fill_str(), testing::fill_str_gold());
  for (std::uint64_t seed = 0; snippets.size() < 50 && seed < 20; ++seed) {
    for (const auto& r : desk_dataset(seed)) {
      if (snippets.size() == 50) break;
      const auto s = r.snippet();
      if (s.size() <= 30 && !r.dead_lines.empty()) snippets.emplace_back(s, r.dead_lines);
    }
  }
  if (snippets.size() < 50) return {false, fmt("only %zu snippets found", snippets.size())};
  double worst = 0.0;
  double elapsed = 0.0;
  for (const auto& [snippet, gold] : snippets) {
    const auto fixture = FixtureClassifier::from_gold(snippet, gold);
    const auto start = Clock::now();
    const auto got = attribute(snippet, fixture);
    elapsed += seconds_since(start);
    const auto want = brute_force(snippet, fixture);
    if (got.size() != want.size()) return {false, "score count differs"};
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max({worst, std::abs(got[i].a_unused - want[i].a_unused),
                        std::abs(got[i].a_unreachable - want[i].a_unreachable)});
    }
  }
  return {worst <= 1e-9 && elapsed < 10.0,
          fmt("50 snippets, max deviation %.3g, attribute() time %.2fs", worst, elapsed)};
}

// Random simplex points, with a share of vertices and edges to stress the clamp.
class RandomClassifier : public Classifier {
 public:
  explicit RandomClassifier(std::uint64_t seed) : seed_(seed) {}
  ClassProbabilities classify(const CodeSnippet& snippet) const override {
    SeededRng rng(fnv1a64(render(snippet), seed_));
    ClassProbabilities p;
    switch (rng.index(4)) {
      case 0: {
        const std::size_t k = rng.index(3);
        p = {k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
        break;
      }
      case 1: {
        const double t = rng.unit();
        p = rng.index(2) ? ClassProbabilities{0.0, t, 1.0 - t} : ClassProbabilities{t, 0.0, 1.0 - t};
        break;
      }
      default:
        p = normalize(rng.unit() + 1e-6, rng.unit() + 1e-6, rng.unit() + 1e-6);
    }
    std::lock_guard lock(mutex_);
    outputs.push_back(p);
    return p;
  }
  std::string_view kind() const override { return "random"; }
  mutable std::vector<ClassProbabilities> outputs;

 private:
  std::uint64_t seed_;
  mutable std::mutex mutex_;
};

Outcome clamp_and_simplex() {
  const auto corpus = testing::clean_corpus();
  std::size_t outputs = 0;
  std::size_t violations = 0;
  for (std::uint64_t trial = 0; outputs < 10000; ++trial) {
    const CodeSnippet& snippet = trial % 5 == 0 ? testing::fill_str() : corpus[trial % corpus.size()];
    RandomClassifier model(trial);
    const auto scores = attribute(snippet, model);
    const auto want = brute_force(snippet, RandomClassifier(trial));
    for (const auto& p : model.outputs) {
      if (!p.valid()) ++violations;
    }
    outputs += model.outputs.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
      for (DeadType t : {DeadType::kUnused, DeadType::kUnreachable}) {
        const double a = scores[i][t];
        if (!(a >= 0.0 && a <= 1.0) || std::abs(a - want[i][t]) > 1e-12) ++violations;
      }
    }
  }
  return {violations == 0, fmt("%zu classifier outputs, %zu violations", outputs, violations)};
}

Outcome soft_threshold_laws() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    const int grid = trial % 2 == 0 ? 0 : 4 + static_cast<int>(rng() % 12);
    std::vector<AttributionScore> scores;
    for (std::size_t i = 1; i <= n; ++i) {
      auto draw = [&] {
        const double v = unit(rng);
        return grid == 0 ? v : std::round(v * grid) / grid;
      };
      scores.push_back({i, draw(), draw()});
    }
    const double tau_a = 1.0 + unit(rng) * 4;
    const double tau_b = tau_a + unit(rng) * 4;
    const auto a = select_candidates(scores, tau_a);
    const auto b = select_candidates(scores, tau_b);
    const auto one = select_candidates(scores, 1.0);
    for (DeadType t : {DeadType::kUnused, DeadType::kUnreachable}) {
      double best = 0.0;
      for (const auto& s : scores) best = std::max(best, s[t]);
      std::set<std::size_t> argmax;
      if (best > kDefaultEpsilon) {
        for (const auto& s : scores) {
          if (s[t] == best) argmax.insert(s.index);
        }
      }
      const std::set<std::size_t> sa(a.lines(t).begin(), a.lines(t).end());
      const std::set<std::size_t> sb(b.lines(t).begin(), b.lines(t).end());
      const std::set<std::size_t> s1(one.lines(t).begin(), one.lines(t).end());
      if (!std::includes(sa.begin(), sa.end(), argmax.begin(), argmax.end())) ++violations;
      if (!std::includes(sb.begin(), sb.end(), sa.begin(), sa.end())) ++violations;
      if (s1 != argmax) ++violations;
      for (std::size_t index : sb) {
        if (scores[index - 1][t] <= kDefaultEpsilon) ++violations;
      }
    }
  }
  return {violations == 0, fmt("1000 trials (n <= 64), %zu violations", violations)};
}

Outcome pattern_safety() {
  const auto corpus = testing::clean_corpus();
  std::map<Language, std::vector<CodeSnippet>> hosts;
  for (const auto& s : corpus) hosts[s.language()].push_back(s);
  const auto start = Clock::now();
  std::size_t checks = 0;
  std::size_t failures = 0;
  for (const auto& spec : forge::catalog()) {
    for (Language language : {Language::kPython, Language::kJava}) {
      if (!spec.supports(language)) {
        ++failures;
        continue;
      }
      const auto& pool = hosts[language];
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto& host = pool[seed % pool.size()];
        const auto block = forge::instantiate(spec.id, language, seed);
        const auto record = forge::insert(host, block, seed);
        const bool ok = forge::prove_guard_false(block) && forge::names_fresh(host, block) &&
                        forge::strip_insertion(record) == host;
        ++checks;
        if (!ok) ++failures;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 30.0,
          fmt("%zu patterns x 50 seeds x 2 languages: %zu checks, %zu failures, %.2fs",
              forge::catalog().size(), checks, failures, elapsed)};
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::istringstream in(testing::slurp(path));
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

Outcome tool_gap() {
  const auto records = harness::adversarial_split(testing::clean_corpus(),
                                                  forge::split_patterns(0, 0.5).test, 0);
  std::vector<CodeClass> gold;
  std::vector<CodeClass> predicted;
  for (const auto& r : records) {
    gold.push_back(to_class(r.label));
    predicted.push_back(harness::oracle_prediction(r));
  }
  const auto m = harness::metrics_from_labels(gold, predicted);
  std::size_t naive_total = 0;
  std::size_t naive_hit = 0;
  for (const auto& c : read_jsonl(testing::fixtures_dir() / "oracle" / "naive_cases.jsonl")) {
    const auto snippet = split_lines(c["code"].get<std::string>(),
                                     parse_language(c["language"].get<std::string>()));
    std::vector<std::size_t> got;
    for (const auto& f : oracle::find_naive_unreachable(snippet)) got.push_back(f.index);
    ++naive_total;
    if (got == c["expected"].get<std::vector<std::size_t>>()) ++naive_hit;
  }
  const double unused_r = m[CodeClass::kUnused].recall;
  const double unreachable_r = m[CodeClass::kUnreachable].recall;
  const double naive = 100.0 * static_cast<double>(naive_hit) / static_cast<double>(naive_total);
  return {unused_r == 100.0 && unreachable_r <= 20.0 && naive == 100.0,
          fmt("%zu adversarial records: unused R %.2f, unreachable R %.2f; naive fixtures %.2f%%",
              records.size(), unused_r, unreachable_r, naive)};
}

Outcome localization() {
  std::vector<harness::DatasetRecord> test;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto& r : desk_dataset(seed)) {
      if (r.split != harness::Split::kTest) continue;
      r.id = std::to_string(seed) + "/" + r.id;
      test.push_back(std::move(r));
    }
  }
  harness::PipelineConfig config;
  config.classifier_kind = ClassifierKind::kFixture;
  config.mode = harness::Mode::kNoLlm;
  config.tau = 2.0;
  const auto reports = harness::run_all(test, config, nullptr, 1);
  const auto m = harness::compute_metrics(reports, test);
  const auto& loc = m.localization;
  const double recall = loc.line_recall.value_or(0.0);
  const double size = loc.mean_candidate_size.value_or(INFINITY);
  return {recall >= 0.95 && size <= 3.0,
          fmt("test splits of 10 seeds (%zu records): line recall %.4f (%zu/%zu), mean size %.2f",
              test.size(), recall, loc.hits, loc.gold_lines, size)};
}

Outcome metrics_correctness() {
  std::mt19937_64 rng(77);
  const SnippetLabel labels[] = {SnippetLabel::kNormal, SnippetLabel::kUnused,
                                 SnippetLabel::kUnreachable, SnippetLabel::kBoth};
  double worst = 0.0;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    std::vector<harness::DatasetRecord> golds(n);
    std::vector<harness::AnalysisReport> reports(n);
    std::array<std::array<double, 3>, 3> confusion{};
    for (std::size_t i = 0; i < n; ++i) {
      golds[i].id = "r" + std::to_string(i);
      golds[i].code = "x = 1\n";
      golds[i].label = labels[rng() % 4];
      reports[i].record_id = golds[i].id;
      reports[i].predicted_label = static_cast<CodeClass>(rng() % 3);
      // both counts as unreachable.
      const int g = golds[i].label == SnippetLabel::kNormal   ? 0
                    : golds[i].label == SnippetLabel::kUnused ? 1
                                                              : 2;
      const int p = reports[i].predicted_label == CodeClass::kNormal   ? 0
                    : reports[i].predicted_label == CodeClass::kUnused ? 1
                                                                       : 2;
      confusion[g][p] += 1;
    }
    std::shuffle(reports.begin(), reports.end(), rng);
    const auto m = harness::compute_metrics(reports, golds);
    double correct = 0;
    for (int c = 0; c < 3; ++c) {
      correct += confusion[c][c];
      const double tp = confusion[c][c];
      const double col = confusion[0][c] + confusion[1][c] + confusion[2][c];
      const double row = confusion[c][0] + confusion[c][1] + confusion[c][2];
      const double p = col > 0 ? 100.0 * tp / col : 0.0;
      const double r = row > 0 ? 100.0 * tp / row : 0.0;
      const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
      const CodeClass cls = c == 0 ? CodeClass::kNormal : c == 1 ? CodeClass::kUnused : CodeClass::kUnreachable;
      worst = std::max({worst, std::abs(m[cls].precision - p), std::abs(m[cls].recall - r),
                        std::abs(m[cls].f1 - f)});
    }
    worst = std::max(worst, std::abs(m.accuracy - 100.0 * correct / static_cast<double>(n)));
    if (m.total != n) ++mismatches;
  }
  return {worst <= 1e-9 && mismatches == 0,
          fmt("200 random label vectors, max deviation %.3g", worst)};
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string command = "env -u DCE_LLM_BASE_URL -u DCE_LLM_API_KEY -u DCE_LLM_MODEL "
                              "http_proxy=http://127.0.0.1:9 https_proxy=http://127.0.0.1:9 " +
                              std::string(DCE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run run;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return run;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) run.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

Outcome hermetic_e2e() {
  const auto e2e = testing::fixtures_dir() / "e2e";
  const auto golden = testing::slurp(e2e / "golden.jsonl");
  const auto run = run_cli("--workers 4 analyze --data " + (e2e / "records.jsonl").string() +
                           " --classifier fixture --replay " + (e2e / "replay").string());
  std::size_t lines = static_cast<std::size_t>(std::count(golden.begin(), golden.end(), '\n'));
  std::size_t errors = 0;
  for (const auto& doc : read_jsonl(e2e / "golden.jsonl")) errors += !doc["error"].is_null();
  return {run.code == 0 && run.out == golden && lines == 12 && errors == 0,
          fmt("exit %d, %zu golden reports, %s", run.code, lines,
              run.out == golden ? "byte-identical" : "output differs")};
}

Outcome ablation_parity() {
  const auto e2e = testing::fixtures_dir() / "e2e";
  const auto dir = std::filesystem::temp_directory_path() / "dce_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> keys{"approach", "config_fingerprint", "split", "classes",
                                      "accuracy", "total", "confusion", "localization"};
  std::map<std::string, nlohmann::ordered_json> metrics;
  std::string problems;
  std::size_t no_llm_explanations = 0;
  for (const char* mode : {"full", "no_pivot", "no_llm", "no_attribution"}) {
    const auto out = dir / (std::string(mode) + ".json");
    const auto reports = dir / (std::string(mode) + ".jsonl");
    const auto run = run_cli("eval --data " + (e2e / "records.jsonl").string() +
                             " --split all --classifier fixture --replay " +
                             (e2e / "replay").string() + " --mode " + mode + " --out " +
                             out.string() + " --reports " + reports.string());
    if (run.code != 0) {
      problems += std::string(" ") + mode + " exited " + std::to_string(run.code) + ";";
      continue;
    }
    metrics[mode] = nlohmann::ordered_json::parse(testing::slurp(out));
    std::vector<std::string> got;
    for (const auto& item : metrics[mode].items()) got.push_back(item.key());
    const auto& doc = metrics[mode];
    bool classes_ok = doc.contains("classes");
    for (const char* cls : {"normal", "unused", "unreachable"}) {
      for (const char* field : {"recall", "precision", "f1", "support"}) {
        classes_ok = classes_ok && doc["classes"].contains(cls) && doc["classes"][cls].contains(field);
      }
    }
    for (const char* field : {"line_recall", "mean_candidate_size", "gold_lines", "hits"}) {
      classes_ok = classes_ok && doc.contains("localization") && doc["localization"].contains(field);
    }
    if (got != keys || !classes_ok) problems += std::string(" ") + mode + " schema differs;";
    for (const auto& report : read_jsonl(reports)) {
      if (!report["error"].is_null()) problems += std::string(" ") + mode + " record error;";
      if (std::string(mode) != "no_llm") continue;
      for (const auto& f : report["findings"]) no_llm_explanations += !f["explanation"].get<std::string>().empty();
      if (!report["verdict"].is_null()) ++no_llm_explanations;
    }
  }
  if (metrics.size() != 4) return {false, "failed:" + problems};
  auto recall = [&](const char* mode) {
    const auto& v = metrics[mode]["localization"]["line_recall"];
    return v.is_null() ? 0.0 : v.get<double>();
  };
  const bool ok = problems.empty() && no_llm_explanations == 0 &&
                  recall("full") >= recall("no_attribution");
  return {ok, fmt("4 modes, full loc recall %.4f vs no_attribution %.4f, no_llm explanations %zu%s",
                  recall("full"), recall("no_attribution"), no_llm_explanations,
                  problems.empty() ? "" : (";" + problems).c_str())};
}

Outcome leakage_guard() {
  forge::PatternSplit leaky = forge::split_patterns(5, 0.5);
  leaky.test.push_back(leaky.train.front());
  harness::SynthOptions options;
  options.seed = 5;
  options.patterns = leaky;
  try {
    harness::synth_dataset(testing::clean_corpus(), options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPatternLeakage) {
      return {true, std::string("overlapping split rejected: ") + e.what()};
    }
    return {false, std::string("wrong error: ") + e.what()};
  }
  return {false, "overlapping split accepted"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"attribution oracle equivalence", attribution_equivalence},
      {"clamp and simplex invariants", clamp_and_simplex},
      {"soft-threshold laws", soft_threshold_laws},
      {"pattern safety sweep", pattern_safety},
      {"tool-gap analog", tool_gap},
      {"localization quality", localization},
      {"metrics correctness", metrics_correctness},
      {"hermetic end-to-end", hermetic_e2e},
      {"ablation harness parity", ablation_parity},
      {"pattern-leakage guard", leakage_guard},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << std::endl;
    failed += outcome.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
