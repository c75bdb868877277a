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

#include "dce/error.hpp"

namespace dce {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptySource: return "EmptySource";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kMinimumSizeViolation: return "MinimumSizeViolation";
    case ErrorCode::kNotACondition: return "NotACondition";
    case ErrorCode::kMalformedGuard: return "MalformedGuard";
    case ErrorCode::kUnknownLanguage: return "UnknownLanguage";
    case ErrorCode::kUnknownPattern: return "UnknownPattern";
    case ErrorCode::kUnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::kNoInsertionPoint: return "NoInsertionPoint";
    case ErrorCode::kInvalidTau: return "InvalidTau";
    case ErrorCode::kIneligibleLine: return "IneligibleLine";
    case ErrorCode::kRemoteUnavailable: return "RemoteUnavailable";
    case ErrorCode::kRemoteMalformed: return "RemoteMalformed";
    case ErrorCode::kTransportUnavailable: return "TransportUnavailable";
    case ErrorCode::kReplayMiss: return "ReplayMiss";
    case ErrorCode::kUnparseableVerdict: return "UnparseableVerdict";
    case ErrorCode::kInsufficientCorpus: return "InsufficientCorpus";
    case ErrorCode::kMisalignedInputs: return "MisalignedInputs";
    case ErrorCode::kPatternLeakage: return "PatternLeakage";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace dce
