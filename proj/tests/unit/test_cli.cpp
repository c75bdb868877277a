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
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "test_support.hpp"

namespace fs = std::filesystem;
namespace testing = dce::testing;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
Run cli(const std::string& args, const std::string& env = "") {
  const std::string command = "env -u DCE_LLM_BASE_URL -u DCE_LLM_API_KEY -u DCE_LLM_MODEL " +
                              env + " " + DCE_CLI_PATH + " " + args + " 2>/dev/null";
  Run run;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) run.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "dce_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string dead_file() {
  const auto path = scratch() / "dead.py";
  std::ofstream(path) << "def f(x):\n    return x\n    x += 1\n    print(x)\n";
  return path.string();
}

double reported_tau(const Run& run) {
  REQUIRE(run.code == 0);
  const auto report = json::parse(run.out.substr(0, run.out.find('\n')));
  REQUIRE(report["candidates"].is_object());
  return report["candidates"]["tau"].get<double>();
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto help = cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);
  CHECK(cli("analyze --no-such-flag").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE("credentials are not accepted as flags") {
  CHECK(cli("analyze --api-key sk-secret " + dead_file()).code == 2);
  CHECK(cli("analyze --help").out.find("api-key") == std::string::npos);
}

TEST_CASE("invalid configuration exits with a usage error") {
  CHECK(cli("analyze --tau 0.5 --mode no_llm " + dead_file()).code == 2);
  CHECK(cli("analyze --mode fast " + dead_file()).code == 2);
  // Full mode without a replay store needs the live transport variables.
  CHECK(cli("analyze " + dead_file()).code == 2);
}

TEST_CASE("flags beat environment beat config file") {
  const auto config = scratch() / "dce.toml";
  std::ofstream(config) << "[analyze]\ntau = 3.0\nmode = \"no_llm\"\n";
  const std::string file = dead_file();
  const std::string with_config = "--config " + config.string() + " analyze " + file;
  CHECK(reported_tau(cli(with_config)) == 3.0);
  CHECK(reported_tau(cli(with_config, "DCE_TAU=4")) == 4.0);
  CHECK(reported_tau(cli(with_config + " --tau 5", "DCE_TAU=4")) == 5.0);
  CHECK(reported_tau(cli("analyze --mode no_llm " + file)) == 2.0);
  CHECK(reported_tau(cli("analyze " + file, "DCE_MODE=no_llm DCE_CONFIG=" + config.string())) ==
        3.0);
}

TEST_CASE("oracle-only analysis") {
  const auto run = cli("analyze --oracle-only " + dead_file());
  REQUIRE(run.code == 0);
  std::istringstream lines(run.out);
  std::string line;
  std::vector<std::size_t> indices;
  while (std::getline(lines, line)) indices.push_back(json::parse(line)["index"].get<std::size_t>());
  CHECK(indices == std::vector<std::size_t>{3, 4});
}

TEST_CASE("synth and eval are byte-stable") {
  const auto dir = scratch();
  const std::string corpus = (testing::fixtures_dir() / "corpus").string();
  for (const char* name : {"a", "b"}) {
    const std::string data = (dir / (std::string(name) + ".jsonl")).string();
    REQUIRE(cli("synth --corpus " + corpus + " --out " + data + " --seed 7").code == 0);
    const std::string metrics = (dir / (std::string(name) + "_metrics.json")).string();
    REQUIRE(cli("--workers 2 eval --data " + data + " --classifier fixture --mode no_llm --out " +
                metrics)
                .code == 0);
  }
  CHECK(testing::slurp(dir / "a.jsonl") == testing::slurp(dir / "b.jsonl"));
  CHECK(testing::slurp(dir / "a_metrics.json") == testing::slurp(dir / "b_metrics.json"));
  const auto metrics = json::parse(testing::slurp(dir / "a_metrics.json"));
  CHECK(metrics.contains("classes"));
  CHECK(metrics.contains("config_fingerprint"));
}

TEST_CASE("replayed analysis matches the golden reports") {
  const auto e2e = testing::fixtures_dir() / "e2e";
  const auto run = cli("--workers 3 analyze --data " + (e2e / "records.jsonl").string() +
                       " --classifier fixture --replay " + (e2e / "replay").string());
  CHECK(run.code == 0);
  CHECK(run.out == testing::slurp(e2e / "golden.jsonl"));
}

TEST_CASE("audit and patterns subcommands") {
  const auto dir = scratch();
  std::ofstream(dir / "orig.py") << testing::kFillStr;
  std::string fixed = testing::kFillStr;
  fixed.erase(fixed.find("  s3 = s1 + '<EOS>'\n"), 20);
  std::ofstream(dir / "fixed.py") << fixed;
  const auto run = cli("audit --original " + (dir / "orig.py").string() + " --fixed " +
                       (dir / "fixed.py").string() + " --gold 4:unused");
  REQUIRE(run.code == 0);
  const auto report = json::parse(run.out);
  CHECK(report["removed_all_gold"] == true);
  CHECK(report["changed_lines"] == 1);

  const auto patterns = cli("patterns --json");
  REQUIRE(patterns.code == 0);
  CHECK(json::parse(patterns.out).size() == 24);
}
