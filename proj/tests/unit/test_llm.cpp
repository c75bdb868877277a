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

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "dce/error.hpp"
#include "dce/hash.hpp"
#include "dce/llm.hpp"
#include "fake_server.hpp"
#include "test_support.hpp"

using namespace dce;
using namespace dce::llm;
using nlohmann::json;

namespace {

const char* kHintedFillStr =
    "You review source code for dead code: assignments whose values are never read and "
    "statements that can never execute. Answer about the code and suspect lines below in this "
    "format:\n"
    "Dead code: Yes or No\n"
    "Then, for every dead line,\n"
    "Line Number: <line number>\n"
    "Type: Unused or Unreachable\n"
    "Explanation: <why the line is dead>\n"
    "\n"
    "Last, give the program with the dead code removed:\n"
    "Fixed Code: <fixed code>\n"
    "\n"
    "Code:\n"
    "1: def fill_str(Data):\n"
    "2:   s1 = input()\n"
    "3:   s2 = s1 + '<PAD>'\n"
    "4:   s3 = s1 + '<EOS>'\n"
    "5:   if len(s2) == 0:\n"
    "6:     print('Empty string')\n"
    "7:     Data.pad_str = None\n"
    "8:     Data.eos_str = None\n"
    "9:   else:\n"
    "10:     Data.pad_str = s2\n"
    "11:     Data.eos_str = 's3'\n"
    "Suspect Lines: unused: 4: s3 = s1 + '<EOS>' ; unreachable: 5: if len(s2) == 0: ; "
    "6: print('Empty string') ; 7: Data.pad_str = None ; 8: Data.eos_str = None\n";

const char* kGoodReply =
    "Dead code: Yes\n"
    "Line Number: 4\n"
    "Type: Unused\n"
    "Explanation: s3 is assigned but never read.\n"
    "Line Number: 5\n"
    "Type: Unreachable\n"
    "Explanation: s2 always ends with '<PAD>', so its length is never zero.\n"
    "Fixed Code:\n"
    "def fill_str(Data):\n"
    "  s1 = input()\n";

CandidateSet fill_str_candidates() {
  CandidateSet c;
  c.unused_lines = {4};
  c.unreachable_lines = {5, 6, 7, 8};
  return c;
}

class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string chat(const PromptMessages& messages, const ChatParams&) const override {
    seen.push_back(messages);
    return replies_.at(seen.size() - 1);
  }
  std::string_view name() const override { return "scripted"; }
  mutable std::vector<PromptMessages> seen;

 private:
  std::vector<std::string> replies_;
};

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

struct EnvGuard {
  explicit EnvGuard(std::vector<std::pair<const char*, const char*>> values) {
    for (auto [name, value] : values) {
      names.push_back(name);
      if (value == nullptr) {
        unsetenv(name);
      } else {
        setenv(name, value, 1);
      }
    }
  }
  ~EnvGuard() {
    for (const char* name : names) unsetenv(name);
  }
  std::vector<const char*> names;
};

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hinted prompt text is frozen") {
  const auto messages = build_hinted_prompt(testing::fill_str(), fill_str_candidates());
  REQUIRE(messages.size() == 1);
  CHECK(messages[0].role == Role::kUser);
  CHECK(messages[0].content == kHintedFillStr);
  CHECK(prompt_key(messages) == sha256_hex(messages_json(messages)));
  CHECK(messages_json(messages).rfind(R"([{"content":"You review)", 0) == 0);
}

TEST_CASE("base prompt has no suspect lines") {
  const auto base = build_base_prompt(testing::fill_str());
  REQUIRE(base.size() == 1);
  CHECK(base[0].content.find("Suspect Lines:") == std::string::npos);
  CHECK(base[0].content.find("Answer about the code below in this format:") != std::string::npos);
  CHECK(base[0].content.find("11:     Data.eos_str = 's3'\n") != std::string::npos);
  CHECK(render_suspect_lines(testing::fill_str(), {}) == "none");
  CHECK(prompt_key(base) != prompt_key(build_hinted_prompt(testing::fill_str(), {})));
}

TEST_CASE("numbered code leaves blank lines bare") {
  const auto s = split_lines("x = 1\n\ny = x\n", Language::kPython);
  CHECK(numbered_code(s) == "1: x = 1\n2:\n3: y = x\n");
}

TEST_CASE("parse a well-formed reply") {
  const auto v = parse_response(kGoodReply, 11);
  CHECK(v.has_dead_code);
  REQUIRE(v.findings.size() == 2);
  CHECK(v.findings[0] == Finding{4, DeadType::kUnused, "s3 is assigned but never read."});
  CHECK(v.findings[1].line == 5);
  CHECK(v.findings[1].type == DeadType::kUnreachable);
  REQUIRE(v.fixed_code.has_value());
  CHECK(*v.fixed_code == "def fill_str(Data):\n  s1 = input()\n");
  CHECK(v.warnings.empty());
  CHECK(v.raw == kGoodReply);
}

TEST_CASE("parser tolerates markdown, fences and numbering") {
  const char* reply =
      "**Dead code:** yes.\n"
      "- **Line Number:** line 7\n"
      "- **Type:** unreachable code\n"
      "- **Explanation:** the guard\n"
      "  is never true.\n"
      "**Fixed Code:**\n"
      "```python\n"
      "1: def f():\n"
      "2:     return 1\n"
      "```\n";
  const auto v = parse_response(reply, 9);
  REQUIRE(v.findings.size() == 1);
  CHECK(v.findings[0] == Finding{7, DeadType::kUnreachable, "the guard is never true."});
  CHECK(*v.fixed_code == "def f():\n    return 1\n");
}

TEST_CASE("parser drops bad findings with warnings") {
  const char* reply =
      "Dead code: Yes\n"
      "Line Number: 40\nType: Unused\nExplanation: out of range\n"
      "Line Number: 2\nType: Deprecated\nExplanation: wrong type\n"
      "Line Number: 3\nType: Unused\n"
      "Line Number: 0\nType: Unused\nExplanation: zero\n"
      "Line Number: 5\nType: Unused\nExplanation: fine\n";
  const auto v = parse_response(reply, 10);
  CHECK(v.findings == std::vector<Finding>{{5, DeadType::kUnused, "fine"}});
  CHECK(v.warnings.size() == 4);
  CHECK_FALSE(v.fixed_code.has_value());
  // Without a line count nothing is out of range except zero.
  CHECK(parse_response(reply).findings.size() == 2);
}

TEST_CASE("Dead code: No discards stray findings") {
  const auto v = parse_response("Dead code: No\nLine Number: 2\nType: Unused\nExplanation: x\n");
  CHECK_FALSE(v.has_dead_code);
  CHECK(v.findings.empty());
  CHECK(v.warnings.size() == 1);
  CHECK(parse_response("dead code: no").warnings.empty());
}

TEST_CASE("replies without the header are unparseable") {
  CHECK(error_of([] { parse_response("I think line 4 is unused."); }) ==
        ErrorCode::kUnparseableVerdict);
  CHECK(error_of([] { parse_response(""); }) == ErrorCode::kUnparseableVerdict);
}

TEST_CASE("ask retries once with a reminder") {
  const auto messages = build_base_prompt(testing::fill_str());
  ScriptedTransport transport({"Sure! Let me look.", kGoodReply});
  const auto exchange = ask(transport, messages, {}, 11);
  CHECK(exchange.calls == 2);
  CHECK(exchange.verdict.findings.size() == 2);
  REQUIRE(transport.seen.size() == 2);
  CHECK(transport.seen[1] == with_reminder(messages));
  CHECK(transport.seen[1][0].content.find(format_reminder()) != std::string::npos);

  ScriptedTransport stubborn({"no", "still no"});
  CHECK(error_of([&] { ask(stubborn, messages, {}); }) == ErrorCode::kUnparseableVerdict);
  CHECK(stubborn.seen.size() == 2);

  ScriptedTransport once({kGoodReply});
  CHECK(ask(once, messages, {}).calls == 1);
}

TEST_CASE("replay transport looks up the prompt key") {
  const auto dir = std::filesystem::temp_directory_path() / "dce_replay_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto messages = build_base_prompt(testing::fill_str());
  std::ofstream(dir / (prompt_key(messages) + ".txt")) << kGoodReply;
  ReplayTransport replay(dir);
  CHECK(replay.chat(messages, {}) == kGoodReply);
  CHECK(error_of([&] { replay.chat(build_hinted_prompt(testing::fill_str(), {}), {}); }) ==
        ErrorCode::kReplayMiss);
  std::filesystem::remove_all(dir);
  CHECK(error_of([&] { ReplayTransport{dir}; }) == ErrorCode::kTransportUnavailable);
}

TEST_CASE("live config comes from the environment") {
  {
    EnvGuard env({{"DCE_LLM_BASE_URL", "http://h:1/v1"},
                  {"DCE_LLM_API_KEY", "sk-test"},
                  {"DCE_LLM_MODEL", "m"}});
    const auto config = LiveConfig::from_env();
    CHECK(config.base_url == "http://h:1/v1");
    CHECK(config.api_key == "sk-test");
    CHECK(config.model == "m");
  }
  EnvGuard missing({{"DCE_LLM_BASE_URL", nullptr}, {"DCE_LLM_MODEL", "m"}});
  CHECK(error_of([] { LiveConfig::from_env(); }) == ErrorCode::kTransportUnavailable);
}

TEST_CASE("live transport speaks chat completions") {
  testing::FakeServer fake;
  json body;
  std::string auth;
  std::atomic<int> calls{0};
  fake.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (++calls == 1) {
      res.status = 502;
      return;
    }
    body = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", kGoodReply}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  fake.server().Post("/bad/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
  });
  fake.start();

  LiveConfig config;
  config.base_url = fake.url("/v1");
  config.api_key = "sk-test";
  config.model = "tiny";
  config.backoff = std::chrono::milliseconds(1);
  LiveTransport live(config);
  const auto messages = build_hinted_prompt(testing::fill_str(), fill_str_candidates());
  CHECK(live.chat(messages, {}) == kGoodReply);
  CHECK(calls == 2);
  CHECK(auth == "Bearer sk-test");
  CHECK(body["model"] == "tiny");
  CHECK(body["temperature"].get<double>() == doctest::Approx(0.1));
  CHECK(body["max_tokens"] == 1024);
  CHECK(body["messages"] == json::parse(messages_json(messages)));

  config.base_url = fake.url("/bad");
  LiveTransport rejected(config);
  CHECK(error_of([&] { rejected.chat(messages, {}); }) == ErrorCode::kTransportUnavailable);
}
