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
#include "dce/llm.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <semaphore>
#include <sstream>
#include <thread>
#include <tuple>

#include "dce/error.hpp"
#include "dce/hash.hpp"
#include "dce/lexer.hpp"
#include "http_util.hpp"

namespace dce::llm {
namespace {

using nlohmann::json;

constexpr std::string_view kIntro =
    "You review source code for dead code: assignments whose values are never read and "
    "statements that can never execute. ";
constexpr std::string_view kAskBase = "Answer about the code below in this format:\n";
constexpr std::string_view kAskHinted =
    "Answer about the code and suspect lines below in this format:\n";
constexpr std::string_view kFormat =
    "Dead code: Yes or No\n"
    "Then, for every dead line,\n"
    "Line Number: <line number>\n"
    "Type: Unused or Unreachable\n"
    "Explanation: <why the line is dead>\n"
    "\n"
    "Last, give the program with the dead code removed:\n"
    "Fixed Code: <fixed code>\n"
    "\n"
    "Code:\n";
constexpr std::string_view kReminder =
    "Your previous reply did not follow the required format. Begin with \"Dead code: Yes\" or "
    "\"Dead code: No\" and use the fields exactly as listed above.";

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

enum class Key { kDeadCode, kLineNumber, kType, kExplanation, kFixedCode };

// Recognizes "Key: value" allowing markdown decoration such as "**Type:**"
// or a leading list bullet.
std::optional<std::pair<Key, std::string>> match_key(std::string_view line) {
  static const std::regex kPattern(
      R"(^[\s>*#-]*\**\s*(dead code|line number|line|type|explanation|fixed code)\s*\**\s*:\s*\**\s*(.*)$)",
      std::regex::icase);
  std::string text(line);
  std::smatch m;
  if (!std::regex_match(text, m, kPattern)) return std::nullopt;
  std::string key = lower(m[1].str());
  Key k = key == "dead code"     ? Key::kDeadCode
          : key == "type"        ? Key::kType
          : key == "explanation" ? Key::kExplanation
          : key == "fixed code"  ? Key::kFixedCode
                                 : Key::kLineNumber;
  return std::make_pair(k, std::string(lex::trim(m[2].str())));
}

std::vector<std::string> split(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\r') continue;
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  lines.push_back(current);
  return lines;
}

std::string clean_fixed_code(std::vector<std::string> lines) {
  while (!lines.empty() && lex::trim(lines.front()).empty()) lines.erase(lines.begin());
  while (!lines.empty() && lex::trim(lines.back()).empty()) lines.pop_back();
  if (!lines.empty() && lex::trim(lines.front()).rfind("```", 0) == 0) {
    lines.erase(lines.begin());
    auto close = std::find_if(lines.rbegin(), lines.rend(), [](const std::string& l) {
      return lex::trim(l).rfind("```", 0) == 0;
    });
    if (close != lines.rend()) lines.erase(std::next(close).base(), lines.end());
  }
  static const std::regex kNumbered(R"(^\d+:( |$))");
  bool numbered = !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const std::string& l) {
    return std::regex_search(l, kNumbered);
  });
  if (numbered) {
    for (auto& l : lines) {
      auto colon = l.find(':');
      l = l.substr(std::min(l.size(), colon + 2));
    }
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

std::string_view to_string(Role role) { return role == Role::kSystem ? "system" : "user"; }

std::string numbered_code(const CodeSnippet& snippet) {
  std::string out;
  for (const auto& line : snippet.lines()) {
    out += std::to_string(line.index) + ":";
    if (!line.text.empty()) out += " " + line.text;
    out += "\n";
  }
  return out;
}

PromptMessages build_base_prompt(const CodeSnippet& snippet) {
  std::string content;
  content += kIntro;
  content += kAskBase;
  content += kFormat;
  content += numbered_code(snippet);
  return {Message{Role::kUser, std::move(content)}};
}

std::string render_suspect_lines(const CodeSnippet& snippet, const CandidateSet& candidates) {
  std::vector<std::string> sections;
  for (DeadType type : {DeadType::kUnused, DeadType::kUnreachable}) {
    const auto& lines = candidates.lines(type);
    if (lines.empty()) continue;
    std::string section = std::string(dce::to_string(type)) + ": ";
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (k > 0) section += " ; ";
      section += std::to_string(lines[k]) + ": " + std::string(lex::trim(snippet.line(lines[k]).text));
    }
    sections.push_back(std::move(section));
  }
  if (sections.empty()) return "none";
  std::string out = sections.front();
  for (std::size_t k = 1; k < sections.size(); ++k) out += " ; " + sections[k];
  return out;
}

PromptMessages build_hinted_prompt(const CodeSnippet& snippet, const CandidateSet& candidates) {
  std::string content;
  content += kIntro;
  content += kAskHinted;
  content += kFormat;
  content += numbered_code(snippet);
  content += "Suspect Lines: " + render_suspect_lines(snippet, candidates) + "\n";
  return {Message{Role::kUser, std::move(content)}};
}

std::string messages_json(const PromptMessages& messages) {
  json array = json::array();
  for (const auto& m : messages) {
    array.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  return array.dump();
}

std::string prompt_key(const PromptMessages& messages) { return sha256_hex(messages_json(messages)); }

ReplayTransport::ReplayTransport(std::filesystem::path directory) : directory_(std::move(directory)) {
  if (!std::filesystem::is_directory(directory_)) {
    throw Error(ErrorCode::kTransportUnavailable,
                "replay directory not found: " + directory_.string());
  }
}

std::string ReplayTransport::chat(const PromptMessages& messages, const ChatParams&) const {
  auto key = prompt_key(messages);
  auto path = directory_ / (key + ".txt");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kReplayMiss, "no canned response " + key + ".txt");
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

LiveConfig LiveConfig::from_env() {
  auto read = [](const char* name) {
    const char* value = std::getenv(name);
    return value == nullptr ? std::string() : std::string(value);
  };
  LiveConfig config;
  config.base_url = read("DCE_LLM_BASE_URL");
  config.api_key = read("DCE_LLM_API_KEY");
  config.model = read("DCE_LLM_MODEL");
  if (config.base_url.empty() || config.model.empty()) {
    throw Error(ErrorCode::kTransportUnavailable,
                "set DCE_LLM_BASE_URL and DCE_LLM_MODEL to use the live transport");
  }
  return config;
}

struct LiveTransport::Limiter {
  explicit Limiter(std::ptrdiff_t slots) : semaphore(slots) {}
  std::counting_semaphore<1024> semaphore;
};

LiveTransport::LiveTransport(LiveConfig config)
    : config_(std::move(config)),
      limiter_(std::make_unique<Limiter>(
          static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(config_.max_in_flight, 1, 1024)))) {
  if (config_.base_url.empty()) throw Error(ErrorCode::kTransportUnavailable, "no base URL");
  std::tie(origin_, prefix_) = detail::split_url(config_.base_url);
}

LiveTransport::~LiveTransport() = default;

std::string chat_request_json(const PromptMessages& messages, const ChatParams& params,
                              std::string_view model) {
  json body;
  body["model"] = std::string(model);
  body["messages"] = json::parse(messages_json(messages));
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_tokens;
  return body.dump();
}

std::string LiveTransport::chat(const PromptMessages& messages, const ChatParams& params) const {
  limiter_->semaphore.acquire();
  struct Release {
    Limiter& limiter;
    ~Release() { limiter.semaphore.release(); }
  } release{*limiter_};

  httplib::Client client(origin_);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  client.set_connection_timeout(seconds.count());
  client.set_read_timeout(seconds.count());
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const std::string target = prefix_ + "/chat/completions";
  const std::string body = chat_request_json(messages, params, config_.model);

  std::string failure;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1LL << (attempt - 1)));
    auto result = client.Post(target, headers, body, "application/json");
    if (!result) {
      failure = "transport error: " + httplib::to_string(result.error());
    } else if (result->status == 200) {
      try {
        auto reply = json::parse(result->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kTransportUnavailable,
                    std::string("unexpected chat completion body: ") + e.what());
      }
    } else if (result->status >= 500 || result->status == 429) {
      failure = "HTTP " + std::to_string(result->status);
    } else {
      throw Error(ErrorCode::kTransportUnavailable, "HTTP " + std::to_string(result->status) +
                                                        " from " + origin_ + target);
    }
    spdlog::warn("chat completion attempt {} failed: {}", attempt + 1, failure);
  }
  throw Error(ErrorCode::kTransportUnavailable, failure);
}

LlmVerdict parse_response(std::string_view text, std::optional<std::size_t> line_count) {
  LlmVerdict verdict;
  verdict.raw = std::string(text);
  const auto lines = split(text);

  struct Draft {
    std::optional<std::size_t> line;
    std::optional<DeadType> type;
    std::string explanation;
    bool bad = false;
  };
  std::vector<Draft> drafts;
  bool seen_header = false;
  bool explaining = false;
  std::optional<std::vector<std::string>> fixed;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto key = match_key(lines[i]);
    if (!key) {
      if (explaining && !drafts.empty()) {
        auto extra = lex::trim(lines[i]);
        if (!extra.empty()) {
          auto& e = drafts.back().explanation;
          e += e.empty() ? std::string(extra) : " " + std::string(extra);
        }
      }
      continue;
    }
    explaining = false;
    auto& [k, value] = *key;
    switch (k) {
      case Key::kDeadCode: {
        if (seen_header) {
          verdict.warnings.push_back("repeated Dead code header ignored");
          break;
        }
        seen_header = true;
        std::string v = lower(value);
        if (v.rfind("yes", 0) == 0) {
          verdict.has_dead_code = true;
        } else if (v.rfind("no", 0) == 0) {
          verdict.has_dead_code = false;
        } else {
          verdict.warnings.push_back("unrecognized Dead code value: " + value);
          verdict.has_dead_code = true;
        }
        break;
      }
      case Key::kLineNumber: {
        drafts.emplace_back();
        static const std::regex kNumber(R"(\d+)");
        std::smatch m;
        if (std::regex_search(value, m, kNumber)) {
          drafts.back().line = std::stoul(m.str());
        } else {
          drafts.back().bad = true;
          verdict.warnings.push_back("line number missing: " + value);
        }
        break;
      }
      case Key::kType: {
        if (drafts.empty() || drafts.back().type) drafts.emplace_back();
        std::string v = lower(value);
        if (v.find("unused") != std::string::npos) {
          drafts.back().type = DeadType::kUnused;
        } else if (v.find("unreachable") != std::string::npos) {
          drafts.back().type = DeadType::kUnreachable;
        } else {
          drafts.back().bad = true;
          verdict.warnings.push_back("unknown dead code type: " + value);
        }
        break;
      }
      case Key::kExplanation:
        if (drafts.empty()) drafts.emplace_back();
        drafts.back().explanation = value;
        explaining = true;
        break;
      case Key::kFixedCode: {
        std::vector<std::string> rest;
        if (!value.empty()) rest.push_back(value);
        rest.insert(rest.end(), lines.begin() + static_cast<std::ptrdiff_t>(i) + 1, lines.end());
        fixed = std::move(rest);
        i = lines.size();
        break;
      }
    }
  }
  if (!seen_header) throw Error(ErrorCode::kUnparseableVerdict, "no \"Dead code:\" header");

  for (const auto& d : drafts) {
    if (d.bad) continue;
    if (!d.line || !d.type) {
      verdict.warnings.push_back("incomplete finding dropped");
      continue;
    }
    if (d.explanation.empty()) {
      verdict.warnings.push_back("finding for line " + std::to_string(*d.line) +
                                 " has no explanation");
      continue;
    }
    if (*d.line == 0 || (line_count && *d.line > *line_count)) {
      verdict.warnings.push_back("line " + std::to_string(*d.line) + " is out of range");
      continue;
    }
    verdict.findings.push_back({*d.line, *d.type, d.explanation});
  }
  if (fixed) {
    std::string code = clean_fixed_code(*fixed);
    if (!lex::trim(code).empty()) verdict.fixed_code = std::move(code);
  }
  if (!verdict.has_dead_code && (!verdict.findings.empty() || verdict.fixed_code)) {
    verdict.warnings.push_back("findings after \"Dead code: No\" ignored");
    verdict.findings.clear();
    verdict.fixed_code.reset();
  }
  return verdict;
}

std::string_view format_reminder() { return kReminder; }

PromptMessages with_reminder(const PromptMessages& messages) {
  PromptMessages out = messages;
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    if (it->role == Role::kUser) {
      it->content += "\n" + std::string(kReminder) + "\n";
      break;
    }
  }
  return out;
}

Exchange ask(const Transport& transport, const PromptMessages& messages, const ChatParams& params,
             std::optional<std::size_t> line_count) {
  Exchange exchange;
  ++exchange.calls;
  std::string reply = transport.chat(messages, params);
  try {
    exchange.verdict = parse_response(reply, line_count);
    return exchange;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnparseableVerdict) throw;
    spdlog::info("unparseable verdict, retrying with a format reminder");
  }
  ++exchange.calls;
  exchange.verdict = parse_response(transport.chat(with_reminder(messages), params), line_count);
  return exchange;
}

}  // namespace dce::llm
