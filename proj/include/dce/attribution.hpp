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

#ifndef DCE_ATTRIBUTION_HPP_
#define DCE_ATTRIBUTION_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "dce/classifier.hpp"
#include "dce/code_model.hpp"
#include "dce/labels.hpp"

namespace dce {

inline constexpr double kDefaultTau = 2.0;
inline constexpr double kDefaultEpsilon = 0.02;

struct AttributionScore {
  std::size_t index = 0;
  double a_unused = 0.0;
  double a_unreachable = 0.0;

  double operator[](DeadType type) const {
    return type == DeadType::kUnused ? a_unused : a_unreachable;
  }
  bool operator==(const AttributionScore&) const = default;
};

struct CandidateSet {
  std::vector<std::size_t> unused_lines;       // by descending a_unused
  std::vector<std::size_t> unreachable_lines;  // by descending a_unreachable
  double tau = kDefaultTau;
  double epsilon = kDefaultEpsilon;

  const std::vector<std::size_t>& lines(DeadType type) const {
    return type == DeadType::kUnused ? unused_lines : unreachable_lines;
  }
  bool empty() const { return unused_lines.empty() && unreachable_lines.empty(); }
  bool operator==(const CandidateSet&) const = default;
};

// Statements and conditions can be perturbed; structural and blank lines
// cannot.
bool eligible(const LineRecord& line);

// Masks a condition's guard or deletes a statement.
CodeSnippet perturb(const CodeSnippet& snippet, std::size_t index,
                    std::string_view mask_token = kDefaultMaskToken);

struct AttributionOptions {
  std::string mask_token{kDefaultMaskToken};
  // Snippets longer than this are scored on a window of this many lines
  // centred on each perturbed line.
  std::size_t window = 512;
  // Perturbations are split across this many threads, each sending its share
  // as one batch.
  std::size_t workers = 1;
};

// One score per line of `snippet`, in line order. Ineligible lines score
// (0, 0).
std::vector<AttributionScore> attribute(const CodeSnippet& snippet,
                                        const Classifier& classifier,
                                        const AttributionOptions& options = {});

CandidateSet select_candidates(const std::vector<AttributionScore>& scores,
                               double tau = kDefaultTau,
                               double epsilon = kDefaultEpsilon);

}  // namespace dce

#endif  // DCE_ATTRIBUTION_HPP_
