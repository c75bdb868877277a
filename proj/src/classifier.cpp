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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "dce/classifier.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <json.hpp>
#include <thread>
#include <tuple>

#include "dce/error.hpp"
#include "http_util.hpp"
#include "dce/oracle.hpp"

namespace dce {

using nlohmann::json;

double ClassProbabilities::operator[](CodeClass cls) const {
  switch (cls) {
    case CodeClass::kNormal: return normal;
    case CodeClass::kUnused: return unused;
    case CodeClass::kUnreachable: return unreachable;
  }
  return 0.0;
}

bool ClassProbabilities::valid(double tolerance) const {
  for (double p : {normal, unused, unreachable}) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
  }
  return std::abs(sum() - 1.0) <= tolerance;
}

ClassProbabilities normalize(double normal, double unused, double unreachable) {
  double total = normal + unused + unreachable;
  if (!(total > 0.0)) return {};
  return {normal / total, unused / total, unreachable / total};
}

CodeClass decide(const ClassProbabilities& probs, std::optional<double> normal_ceiling) {
  CodeClass best = CodeClass::kUnreachable;
  for (CodeClass cls : {CodeClass::kUnused, CodeClass::kNormal}) {
    if (cls == CodeClass::kNormal && normal_ceiling && probs.normal < *normal_ceiling) continue;
    if (probs[cls] > probs[best]) best = cls;
  }
  return best;
}

std::vector<ClassProbabilities> Classifier::classify_batch(
    const std::vector<CodeSnippet>& snippets) const {
  std::vector<ClassProbabilities> out;
  out.reserve(snippets.size());
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    try {
      out.push_back(classify(snippets[i]));
    } catch (Error& e) {
      e.item = i;
      throw;
    }
  }
  return out;
}

ClassProbabilities heuristic_probabilities(std::size_t unused_findings,
                                           std::size_t unreachable_findings) {
  auto mass = [](std::size_t k) {
    return 0.05 + 0.85 * std::min(1.0, static_cast<double>(k) / 2.0);
  };
  return normalize(0.90, mass(unused_findings), mass(unreachable_findings));
}

ClassProbabilities HeuristicClassifier::classify(const CodeSnippet& snippet) const {
  auto annotation = oracle::annotate(snippet);
  std::size_t unused = 0;
  std::size_t unreachable = 0;
  for (const auto& f : annotation.lines) ++(f.type == DeadType::kUnused ? unused : unreachable);
  return heuristic_probabilities(unused, unreachable);
}

FixtureClassifier::FixtureClassifier(std::vector<std::string> unused_texts,
                                     std::vector<std::string> unreachable_texts)
    : unused_(std::move(unused_texts)), unreachable_(std::move(unreachable_texts)) {}

FixtureClassifier FixtureClassifier::from_gold(const CodeSnippet& snippet,
                                               const std::vector<GoldLine>& gold) {
  std::vector<std::string> unused;
  std::vector<std::string> unreachable;
  for (const auto& g : gold) {
    (g.type == DeadType::kUnused ? unused : unreachable).push_back(snippet.line(g.index).text);
  }
  return FixtureClassifier(std::move(unused), std::move(unreachable));
}

ClassProbabilities FixtureClassifier::classify(const CodeSnippet& snippet) const {
  std::map<std::string_view, std::size_t> available;
  for (const auto& line : snippet.lines()) ++available[line.text];
  // Multiset intersection so repeated texts are only matched once each.
  auto present = [&available](const std::vector<std::string>& gold) {
    auto pool = available;
    std::size_t count = 0;
    for (const auto& text : gold) {
      auto it = pool.find(text);
      if (it != pool.end() && it->second > 0) {
        --it->second;
        ++count;
      }
    }
    return count;
  };
  auto mass = [&](const std::vector<std::string>& gold) {
    double denom = static_cast<double>(std::max<std::size_t>(1, gold.size()));
    return 0.05 + 0.8 * static_cast<double>(present(gold)) / denom;
  };
  double unused = mass(unused_);
  double unreachable = mass(unreachable_);
  double normal = std::max(0.0, 1.0 - unused - unreachable);
  return normalize(normal, unused, unreachable);
}

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kHeuristic: return "heuristic";
    case ClassifierKind::kFixture: return "fixture";
    case ClassifierKind::kRemote: return "remote";
  }
  return "unknown";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
  for (auto kind : {ClassifierKind::kHeuristic, ClassifierKind::kFixture, ClassifierKind::kRemote}) {
    if (to_string(kind) == text) return kind;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown classifier kind: " + std::string(text));
}

void ClassifierConfig::validate() const {
  if (kind == ClassifierKind::kRemote && (!endpoint || endpoint->empty())) {
    throw Error(ErrorCode::kInvalidConfig, "remote classifier requires an endpoint");
  }
  if (batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch_size must be at least 1");
}

namespace {

ClassProbabilities parse_probs(const json& item) {
  if (!item.is_object() || !item.contains("probs") || !item["probs"].is_object()) {
    throw Error(ErrorCode::kRemoteMalformed, "missing probs object");
  }
  const json& probs = item["probs"];
  auto field = [&probs](const char* name) {
    if (!probs.contains(name) || !probs[name].is_number()) {
      throw Error(ErrorCode::kRemoteMalformed, std::string("missing probability: ") + name);
    }
    return probs[name].get<double>();
  };
  ClassProbabilities out{field("normal"), field("unused"), field("unreachable")};
  if (!out.valid()) {
    throw Error(ErrorCode::kRemoteMalformed,
                "probabilities do not form a distribution (sum " + std::to_string(out.sum()) + ")");
  }
  return out;
}

json request_item(const CodeSnippet& snippet) {
  return {{"language", std::string(to_string(snippet.language()))}, {"code", render(snippet)}};
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kRemoteMalformed, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

ClassProbabilities parse_probs_json(std::string_view body) { return parse_probs(parse_body(body)); }

struct RemoteClassifier::Pool {
  std::mutex mutex;
  std::vector<std::unique_ptr<httplib::Client>> idle;
};

RemoteClassifier::RemoteClassifier(ClassifierConfig config)
    : config_(std::move(config)), pool_(std::make_unique<Pool>()) {
  config_.kind = ClassifierKind::kRemote;
  config_.validate();
  std::tie(base_, prefix_) = detail::split_url(*config_.endpoint);
}

RemoteClassifier::~RemoteClassifier() = default;

std::string RemoteClassifier::post(std::string_view path, const std::string& body) const {
  std::unique_ptr<httplib::Client> client;
  {
    std::lock_guard lock(pool_->mutex);
    if (!pool_->idle.empty()) {
      client = std::move(pool_->idle.back());
      pool_->idle.pop_back();
    }
  }
  if (!client) {
    client = std::make_unique<httplib::Client>(base_);
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
    client->set_connection_timeout(seconds.count(), micros.count());
    client->set_read_timeout(seconds.count(), micros.count());
    client->set_write_timeout(seconds.count(), micros.count());
  }
  std::string target = prefix_ + std::string(path);
  std::string failure;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1LL << (attempt - 1)));
    ++attempts_;
    auto result = client->Post(target, body, "application/json");
    if (!result) {
      failure = "transport error: " + httplib::to_string(result.error());
    } else if (result->status == 200) {
      std::lock_guard lock(pool_->mutex);
      pool_->idle.push_back(std::move(client));
      return result->body;
    } else if (result->status >= 500 || result->status == 429) {
      failure = "HTTP " + std::to_string(result->status);
    } else {
      throw Error(ErrorCode::kRemoteUnavailable,
                  "HTTP " + std::to_string(result->status) + " from " + base_ + target);
    }
    spdlog::warn("classifier {}{} attempt {} failed: {}", base_, target, attempt + 1, failure);
  }
  throw Error(ErrorCode::kRemoteUnavailable,
              base_ + target + " after " + std::to_string(config_.max_retries + 1) +
                  " attempts: " + failure);
}

ClassProbabilities RemoteClassifier::classify(const CodeSnippet& snippet) const {
  return parse_probs(parse_body(post("/classify", request_item(snippet).dump())));
}

std::vector<ClassProbabilities> RemoteClassifier::classify_batch(
    const std::vector<CodeSnippet>& snippets) const {
  std::vector<ClassProbabilities> out;
  out.reserve(snippets.size());
  for (std::size_t begin = 0; begin < snippets.size(); begin += config_.batch_size) {
    std::size_t end = std::min(snippets.size(), begin + config_.batch_size);
    json items = json::array();
    for (std::size_t i = begin; i < end; ++i) items.push_back(request_item(snippets[i]));
    json reply = parse_body(post("/classify_batch", json{{"items", items}}.dump()));
    if (!reply.is_object() || !reply.contains("results") || !reply["results"].is_array() ||
        reply["results"].size() != end - begin) {
      throw Error(ErrorCode::kRemoteMalformed, "batch response does not match request size");
    }
    for (std::size_t k = 0; k < end - begin; ++k) {
      try {
        out.push_back(parse_probs(reply["results"][k]));
      } catch (Error& e) {
        e.item = begin + k;
        throw;
      }
    }
  }
  return out;
}

std::unique_ptr<Classifier> make_classifier(const ClassifierConfig& config) {
  config.validate();
  switch (config.kind) {
    case ClassifierKind::kHeuristic: return std::make_unique<HeuristicClassifier>();
    case ClassifierKind::kRemote: return std::make_unique<RemoteClassifier>(config);
    case ClassifierKind::kFixture: break;
  }
  throw Error(ErrorCode::kInvalidConfig, "the fixture classifier is built per record from gold lines");
}

}  // namespace dce
