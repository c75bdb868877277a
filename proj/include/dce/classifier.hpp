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

#ifndef DCE_CLASSIFIER_HPP_
#define DCE_CLASSIFIER_HPP_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dce/code_model.hpp"
#include "dce/labels.hpp"

namespace dce {

struct ClassProbabilities {
  double normal = 1.0;
  double unused = 0.0;
  double unreachable = 0.0;

  double operator[](CodeClass cls) const;
  double sum() const { return normal + unused + unreachable; }
  // On the simplex within `tolerance`, every component in [0, 1].
  bool valid(double tolerance = 1e-6) const;
  bool operator==(const ClassProbabilities&) const = default;
};

// Scales non-negative weights onto the simplex.
ClassProbabilities normalize(double normal, double unused, double unreachable);

// Argmax with ties going to unreachable, then unused, then normal. With a
// ceiling, `normal` is predicted only when p_normal reaches it; otherwise the
// larger dead class wins.
CodeClass decide(const ClassProbabilities& probs,
                 std::optional<double> normal_ceiling = std::nullopt);

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ClassProbabilities classify(const CodeSnippet& snippet) const = 0;

  // Element-wise classify; implementations may use a single round trip.
  virtual std::vector<ClassProbabilities> classify_batch(
      const std::vector<CodeSnippet>& snippets) const;

  virtual std::string_view kind() const = 0;
};

// Probabilities the heuristic assigns for the given finding counts.
ClassProbabilities heuristic_probabilities(std::size_t unused_findings,
                                           std::size_t unreachable_findings);

// Oracle-backed stand-in for a trained pivot model.
class HeuristicClassifier : public Classifier {
 public:
  ClassProbabilities classify(const CodeSnippet& snippet) const override;
  std::string_view kind() const override { return "heuristic"; }
};

// Deterministic test double keyed on gold line texts, so deleting a line
// or masking a guard removes it from the "present" count regardless of how
// the remaining lines are renumbered.
class FixtureClassifier : public Classifier {
 public:
  FixtureClassifier(std::vector<std::string> unused_texts,
                    std::vector<std::string> unreachable_texts);

  // Gold texts taken from the given lines of `snippet`.
  static FixtureClassifier from_gold(const CodeSnippet& snippet,
                                     const std::vector<GoldLine>& gold);

  ClassProbabilities classify(const CodeSnippet& snippet) const override;
  std::string_view kind() const override { return "fixture"; }

 private:
  std::vector<std::string> unused_;
  std::vector<std::string> unreachable_;
};

enum class ClassifierKind { kHeuristic, kFixture, kRemote };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view text);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kHeuristic;
  std::optional<std::string> endpoint;
  std::chrono::milliseconds timeout{10000};
  std::size_t max_retries = 3;
  std::size_t batch_size = 16;
  std::chrono::milliseconds backoff{200};

  // Throws InvalidConfig when the invariants do not hold.
  void validate() const;
};

// HTTP client for the classifier wire protocol.
class RemoteClassifier : public Classifier {
 public:
  explicit RemoteClassifier(ClassifierConfig config);
  ~RemoteClassifier() override;

  ClassProbabilities classify(const CodeSnippet& snippet) const override;
  std::vector<ClassProbabilities> classify_batch(
      const std::vector<CodeSnippet>& snippets) const override;
  std::string_view kind() const override { return "remote"; }

  // HTTP requests issued so far, retries included.
  std::size_t attempts() const { return attempts_.load(); }

 private:
  struct Pool;

  std::string post(std::string_view path, const std::string& body) const;

  ClassifierConfig config_;
  std::string base_;    // scheme://host:port
  std::string prefix_;  // path prefix without trailing slash
  std::unique_ptr<Pool> pool_;
  mutable std::atomic<std::size_t> attempts_{0};
};

// Parses one {"probs": {...}, "model": ...} object; RemoteMalformed on any
// schema or simplex violation.
ClassProbabilities parse_probs_json(std::string_view body);

// Builds heuristic or remote classifiers. The fixture kind needs per-record
// gold and is constructed directly.
std::unique_ptr<Classifier> make_classifier(const ClassifierConfig& config);

}  // namespace dce

#endif  // DCE_CLASSIFIER_HPP_
