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

#ifndef DCE_ERROR_HPP_
#define DCE_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dce {

enum class ErrorCode {
  kEmptySource,
  kIndexOutOfRange,
  kMinimumSizeViolation,
  kNotACondition,
  kMalformedGuard,
  kUnknownLanguage,
  kUnknownPattern,
  kUnsupportedLanguage,
  kNoInsertionPoint,
  kInvalidTau,
  kIneligibleLine,
  kRemoteUnavailable,
  kRemoteMalformed,
  kTransportUnavailable,
  kReplayMiss,
  kUnparseableVerdict,
  kInsufficientCorpus,
  kMisalignedInputs,
  kPatternLeakage,
  kInvalidConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `item` identifies the offending
// element of a batch call (0-based) when the failing stage knows it; `line`
// is the 1-based snippet line the error is attributed to, if any.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

  std::optional<std::size_t> item;
  std::optional<std::size_t> line;

 private:
  ErrorCode code_;
};

}  // namespace dce

#endif  // DCE_ERROR_HPP_
