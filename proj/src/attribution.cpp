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

#include "dce/attribution.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <optional>
#include <thread>

#include "dce/error.hpp"

namespace dce {
namespace {

// The lines [first, last] (1-based) as a standalone snippet.
CodeSnippet slice(const CodeSnippet& snippet, std::size_t first, std::size_t last) {
  std::vector<std::string> texts;
  for (std::size_t i = first; i <= last; ++i) texts.push_back(snippet.line(i).text);
  return from_line_texts(texts, snippet.language(), snippet.origin_id());
}

// Classifies `inputs` with up to `workers` threads, keeping input order.
std::vector<ClassProbabilities> classify_all(const Classifier& classifier,
                                             const std::vector<CodeSnippet>& inputs,
                                             std::size_t workers) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, inputs.size()));
  if (workers == 1) return classifier.classify_batch(inputs);
  std::vector<ClassProbabilities> out(inputs.size());
  std::vector<std::exception_ptr> failures(workers);
  std::size_t chunk = (inputs.size() + workers - 1) / workers;
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(inputs.size(), begin + chunk);
      if (begin >= end) break;
      threads.emplace_back([&, w, begin, end] {
        try {
          std::vector<CodeSnippet> part(inputs.begin() + static_cast<std::ptrdiff_t>(begin),
                                        inputs.begin() + static_cast<std::ptrdiff_t>(end));
          auto probs = classifier.classify_batch(part);
          std::copy(probs.begin(), probs.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
        } catch (Error& e) {
          if (e.item) e.item = *e.item + begin;
          failures[w] = std::current_exception();
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

}  // namespace

bool eligible(const LineRecord& line) {
  return line.kind == LineKind::kStatement || line.kind == LineKind::kCondition;
}

CodeSnippet perturb(const CodeSnippet& snippet, std::size_t index, std::string_view mask_token) {
  const LineRecord& line = snippet.line(index);
  if (line.kind == LineKind::kCondition) return mask_condition(snippet, index, mask_token);
  if (line.kind == LineKind::kStatement) return delete_line(snippet, index);
  throw Error(ErrorCode::kIneligibleLine,
              "line " + std::to_string(index) + " is " + std::string(to_string(line.kind)));
}

std::vector<AttributionScore> attribute(const CodeSnippet& snippet, const Classifier& classifier,
                                        const AttributionOptions& options) {
  const std::size_t n = snippet.size();
  std::vector<AttributionScore> scores(n);
  for (std::size_t i = 1; i <= n; ++i) scores[i - 1].index = i;

  // inputs holds the unperturbed context(s) and the perturbations; for
  // target k, base_of[k] and perturbed_of[k] index into it.
  std::vector<std::size_t> targets;
  std::vector<CodeSnippet> inputs;
  std::vector<std::size_t> base_of;
  std::vector<std::size_t> perturbed_of;
  std::vector<std::size_t> owner;  // target position of each input, or npos
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> contexts;
  const std::size_t window = std::min(n, std::max<std::size_t>(1, options.window));
  for (const auto& line : snippet.lines()) {
    if (!eligible(line)) continue;
    std::size_t i = line.index;
    std::size_t first = i > window / 2 ? i - window / 2 : 1;
    first = std::min(first, n - window + 1);
    std::size_t last = first + window - 1;
    auto [it, added] = contexts.emplace(std::make_pair(first, last), inputs.size());
    if (added) {
      inputs.push_back(window == n ? snippet : slice(snippet, first, last));
      owner.push_back(std::string::npos);
    }
    std::optional<CodeSnippet> cut;
    try {
      cut = perturb(inputs[it->second], i - first + 1, options.mask_token);
    } catch (Error& e) {
      // A lone statement cannot be deleted; it keeps a zero score.
      if (e.code() == ErrorCode::kMinimumSizeViolation) continue;
      e.line = i;
      throw;
    }
    base_of.push_back(it->second);
    perturbed_of.push_back(inputs.size());
    owner.push_back(targets.size());
    inputs.push_back(std::move(*cut));
    targets.push_back(i);
  }
  if (targets.empty()) return scores;

  std::vector<ClassProbabilities> probs;
  try {
    probs = classify_all(classifier, inputs, options.workers);
  } catch (Error& e) {
    if (e.item && *e.item < owner.size() && owner[*e.item] != std::string::npos) {
      e.line = targets[owner[*e.item]];
    }
    throw;
  }

  for (std::size_t k = 0; k < targets.size(); ++k) {
    const ClassProbabilities& base = probs[base_of[k]];
    const ClassProbabilities& cut = probs[perturbed_of[k]];
    AttributionScore& score = scores[targets[k] - 1];
    score.a_unused = std::clamp(base.unused - cut.unused, 0.0, 1.0);
    score.a_unreachable = std::clamp(base.unreachable - cut.unreachable, 0.0, 1.0);
  }
  return scores;
}

CandidateSet select_candidates(const std::vector<AttributionScore>& scores, double tau,
                               double epsilon) {
  if (!(tau >= 1.0)) throw Error(ErrorCode::kInvalidTau, "tau must be at least 1");
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "epsilon must be non-negative");
  CandidateSet set;
  set.tau = tau;
  set.epsilon = epsilon;
  for (DeadType type : {DeadType::kUnused, DeadType::kUnreachable}) {
    double best = 0.0;
    for (const auto& s : scores) best = std::max(best, s[type]);
    if (best <= epsilon) continue;
    double threshold = best / tau;
    std::vector<const AttributionScore*> kept;
    for (const auto& s : scores) {
      if (s[type] >= threshold) kept.push_back(&s);
    }
    std::stable_sort(kept.begin(), kept.end(), [type](const auto* x, const auto* y) {
      if ((*x)[type] != (*y)[type]) return (*x)[type] > (*y)[type];
      return x->index < y->index;
    });
    auto& out = type == DeadType::kUnused ? set.unused_lines : set.unreachable_lines;
    for (const auto* s : kept) out.push_back(s->index);
  }
  return set;
}

}  // namespace dce
