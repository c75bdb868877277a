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

// Writes a replay store for a dataset: runs every LLM-using pipeline mode
// with the fixture classifier against a stub model that answers from the
// gold lines, and saves every reply under its prompt key.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "dce/code_model.hpp"
#include "dce/harness.hpp"
#include "dce/lexer.hpp"
#include "dce/llm.hpp"
#include "dce/serialize.hpp"

namespace {

using namespace dce;

enum class Style { kPlain, kMarkdown, kChatty, kPartial };

std::string assigned_name(std::string_view line) {
  static const std::regex kAssign(R"(([A-Za-z_]\w*)\s*(\[[^\]]*\])?\s*[-+*/]?=[^=])");
  std::string text(line);
  std::smatch m;
  return std::regex_search(text, m, kAssign) ? m[1].str() : "the value";
}

std::string explain(const CodeSnippet& snippet, const GoldLine& gold) {
  const auto& line = snippet.line(gold.index);
  if (gold.type == DeadType::kUnused) {
    return "The variable " + assigned_name(line.text) + " is assigned on line " +
           std::to_string(gold.index) + " but its value is never read afterwards.";
  }
  if (line.kind == LineKind::kCondition) {
    auto guard = guard_expression(line.text, snippet.language()).value_or("condition");
    return "The condition " + guard +
           " can never hold given the values computed just before it, so the branch never runs.";
  }
  for (std::size_t k = gold.index; k-- > 1;) {
    const auto& prev = snippet.line(k);
    if (prev.kind == LineKind::kCondition && prev.indent < line.indent) {
      return "This line is inside the branch guarded on line " + std::to_string(k) +
             ", which is never taken.";
    }
    if (lex::trim(prev.text).rfind("return", 0) == 0 && prev.indent == line.indent) {
      return "This statement follows the return on line " + std::to_string(k) +
             " and can never execute.";
    }
  }
  return "Control never reaches this line.";
}

std::string without(const CodeSnippet& snippet, const std::set<std::size_t>& drop) {
  std::string out;
  for (const auto& line : snippet.lines()) {
    if (!drop.count(line.index)) out += line.text + "\n";
  }
  return out;
}

// The reply shape shown for the motivating example: one unused finding and a
// fix that reads s3 instead of the string literal.
std::string fill_str_reply(const CodeSnippet& snippet) {
  std::string fixed;
  for (const auto& line : snippet.lines()) {
    fixed += (line.text == "    Data.eos_str = 's3'" ? "    Data.eos_str = s3" : line.text) + "\n";
  }
  return "Dead code: Yes\n"
         "Line Number: 4\n"
         "Type: Unused\n"
         "Explanation: The variable s3 is defined but never used in any subsequent code. The "
         "code uses the literal string 's3' where the variable was intended.\n"
         "\n"
         "Fixed Code:\n" +
         fixed;
}

std::string reply(const harness::DatasetRecord& record, Style style) {
  const CodeSnippet snippet = record.snippet();
  if (record.id == "fill_str") return fill_str_reply(snippet);
  if (record.dead_lines.empty()) {
    return "Dead code: No\n\nThe code has no unused variables or unreachable statements.\n";
  }
  std::vector<GoldLine> reported = record.dead_lines;
  if (style == Style::kPartial) reported.resize(1);
  std::set<std::size_t> drop;
  for (const auto& g : reported) drop.insert(g.index);
  const bool md = style == Style::kMarkdown;
  auto key = [&](const char* name) {
    return md ? "**" + std::string(name) + ":** " : std::string(name) + ": ";
  };
  std::string out = key("Dead code") + "Yes\n\n";
  for (const auto& g : reported) {
    if (md) out += "- ";
    out += key("Line Number") + std::to_string(g.index) + "\n";
    if (md) out += "  ";
    out += key("Type") + (g.type == DeadType::kUnused ? "Unused" : "Unreachable") + "\n";
    if (md) out += "  ";
    out += key("Explanation") + explain(snippet, g) + "\n\n";
  }
  out += (md ? "**Fixed Code:**" : "Fixed Code:") + std::string("\n");
  if (md) out += std::string("```") + std::string(to_string(record.language)) + "\n";
  out += without(snippet, drop);
  if (md) out += "```\n";
  return out;
}

class StubModel : public llm::Transport {
 public:
  explicit StubModel(std::filesystem::path out) : out_(std::move(out)) {}

  void begin(const harness::DatasetRecord& record, Style style) {
    record_ = &record;
    style_ = style;
  }

  std::string chat(const llm::PromptMessages& messages, const llm::ChatParams&) const override {
    const bool retry = messages.back().content.find(llm::format_reminder()) != std::string::npos;
    std::string text = style_ == Style::kChatty && !retry
                           ? "Let me walk through this code line by line before answering.\n"
                           : reply(*record_, style_);
    std::ofstream(out_ / (llm::prompt_key(messages) + ".txt"), std::ios::binary) << text;
    ++written;
    return text;
  }
  std::string_view name() const override { return "stub"; }

  mutable std::size_t written = 0;

 private:
  std::filesystem::path out_;
  const harness::DatasetRecord* record_ = nullptr;
  Style style_ = Style::kPlain;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write a replay store answering from gold lines"};
  std::string data;
  std::string out;
  app.add_option("--data", data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Replay directory")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto records = io::read_dataset(data);
    std::filesystem::create_directories(out);
    StubModel model(out);
    harness::PipelineConfig config;
    config.classifier_kind = ClassifierKind::kFixture;
    const Style styles[] = {Style::kPlain, Style::kMarkdown, Style::kChatty, Style::kPartial};
    for (auto mode : {harness::Mode::kFull, harness::Mode::kNoPivot, harness::Mode::kNoAttribution}) {
      config.mode = mode;
      for (std::size_t i = 0; i < records.size(); ++i) {
        model.begin(records[i], styles[i % std::size(styles)]);
        const auto report = harness::run_pipeline(records[i], config, &model);
        if (report.error) std::cerr << records[i].id << ": " << *report.error << "\n";
      }
    }
    std::cout << "wrote " << model.written << " replies to " << out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
