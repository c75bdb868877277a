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

#ifndef DCE_LLM_HPP_
#define DCE_LLM_HPP_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dce/attribution.hpp"
#include "dce/code_model.hpp"
#include "dce/labels.hpp"

namespace dce::llm {

inline constexpr std::string_view kTemplateVersion = "v1";

enum class Role { kSystem, kUser };

std::string_view to_string(Role role);

struct Message {
  Role role = Role::kUser;
  std::string content;

  bool operator==(const Message&) const = default;
};

using PromptMessages = std::vector<Message>;

// "N: text" per line, numbered from 1.
std::string numbered_code(const CodeSnippet& snippet);

PromptMessages build_base_prompt(const CodeSnippet& snippet);

PromptMessages build_hinted_prompt(const CodeSnippet& snippet,
                                   const CandidateSet& candidates);

// The body of the "Suspect Lines:" section, e.g.
// "unused: 4: s3 = x ; unreachable: 5: if y:" or "none".
std::string render_suspect_lines(const CodeSnippet& snippet,
                                 const CandidateSet& candidates);

// Compact JSON array of {"role", "content"} objects.
std::string messages_json(const PromptMessages& messages);

// Replay-store key: lowercase hex SHA-256 of messages_json().
std::string prompt_key(const PromptMessages& messages);

struct ChatParams {
  double temperature = 0.1;
  std::size_t max_tokens = 1024;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string chat(const PromptMessages& messages,
                           const ChatParams& params) const = 0;
  virtual std::string_view name() const = 0;
};

// Canned responses stored as <prompt_key>.txt files.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path directory);

  std::string chat(const PromptMessages& messages,
                   const ChatParams& params) const override;
  std::string_view name() const override { return "replay"; }

  const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path directory_;
};

struct LiveConfig {
  std::string base_url;
  std::string api_key;
  std::string model;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_in_flight = 4;
  std::size_t max_retries = 2;
  std::chrono::milliseconds backoff{500};

  // Reads DCE_LLM_BASE_URL, DCE_LLM_API_KEY and DCE_LLM_MODEL. Throws
  // TransportUnavailable when the URL or model is missing.
  static LiveConfig from_env();
};

// OpenAI-compatible chat completions client.
class LiveTransport : public Transport {
 public:
  explicit LiveTransport(LiveConfig config);
  ~LiveTransport() override;

  std::string chat(const PromptMessages& messages,
                   const ChatParams& params) const override;
  std::string_view name() const override { return "live"; }

 private:
  struct Limiter;

  LiveConfig config_;
  std::string origin_;
  std::string prefix_;
  std::unique_ptr<Limiter> limiter_;
};

// Request body the live transport sends.
std::string chat_request_json(const PromptMessages& messages,
                              const ChatParams& params,
                              std::string_view model);

struct Finding {
  std::size_t line = 0;
  DeadType type = DeadType::kUnused;
  std::string explanation;

  bool operator==(const Finding&) const = default;
};

struct LlmVerdict {
  bool has_dead_code = false;
  std::vector<Finding> findings;
  std::optional<std::string> fixed_code;
  std::string raw;
  std::vector<std::string> warnings;

  bool operator==(const LlmVerdict&) const = default;
};

// Tolerant extraction of the answer format. Findings outside
// [1, line_count] are dropped with a warning when a count is given.
// Throws UnparseableVerdict only when no "Dead code:" header exists.
LlmVerdict parse_response(std::string_view text,
                          std::optional<std::size_t> line_count = std::nullopt);

// Text appended to the user message when a response must be retried.
std::string_view format_reminder();

struct Exchange {
  LlmVerdict verdict;
  std::size_t calls = 0;
};

// chat + parse, retrying once with format_reminder() on an unparseable
// reply.
Exchange ask(const Transport& transport, const PromptMessages& messages,
             const ChatParams& params,
             std::optional<std::size_t> line_count = std::nullopt);

// Messages used for the retry after an unparseable reply.
PromptMessages with_reminder(const PromptMessages& messages);

}  // namespace dce::llm

#endif  // DCE_LLM_HPP_
