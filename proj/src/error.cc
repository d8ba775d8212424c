// Copyright 2026 The faitheval Authors.
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

#include "faitheval/error.h"

namespace faitheval {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kConfig: return "ConfigError";
    case Errc::kIo: return "IoError";
    case Errc::kParse: return "ParseError";
    case Errc::kDuplicateKey: return "DuplicateKey";
    case Errc::kEmptyField: return "EmptyField";
    case Errc::kSpanOutOfRange: return "SpanOutOfRange";
    case Errc::kOverlappingSpans: return "OverlappingSpans";
    case Errc::kUnknownSystem: return "UnknownSystem";
    case Errc::kSpanCoversNoToken: return "SpanCoversNoToken";
    case Errc::kIncompleteAnnotation: return "IncompleteAnnotation";
    case Errc::kInsufficientRaters: return "InsufficientRaters";
    case Errc::kRaggedCounts: return "RaggedCounts";
    case Errc::kDegenerateSeries: return "DegenerateSeries";
    case Errc::kMissingReference: return "MissingReference";
    case Errc::kSchema: return "SchemaError";
    case Errc::kProbabilityNotNormalized: return "ProbabilityNotNormalized";
    case Errc::kMissingScore: return "MissingScore";
    case Errc::kNoCandidates: return "NoCandidates";
    case Errc::kMissingAnnotation: return "MissingAnnotation";
    case Errc::kFoldLeakage: return "FoldLeakage";
    case Errc::kMissingFold: return "MissingFold";
    case Errc::kMissingDocument: return "MissingDocument";
    case Errc::kNoQuestions: return "NoQuestions";
    case Errc::kUnknownPair: return "UnknownPair";
    case Errc::kUnknownTask: return "UnknownTask";
    case Errc::kFilterViolation: return "FilterViolation";
    case Errc::kNotAssigned: return "NotAssigned";
    case Errc::kIllegalLabel: return "IllegalLabel";
    case Errc::kAlreadySubmitted: return "AlreadySubmitted";
    case Errc::kWrongTaskType: return "WrongTaskType";
    case Errc::kEndpointUnavailable: return "EndpointUnavailable";
    case Errc::kInvalidResponse: return "InvalidResponse";
  }
  return "UnknownError";
}

int ExitCodeFor(Errc code) {
  switch (code) {
    case Errc::kConfig:
    case Errc::kIo:
      return 1;
    case Errc::kEndpointUnavailable:
    case Errc::kInvalidResponse:
      return 3;
    default:
      return 2;
  }
}

Error::Error(Errc code, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + std::string(ErrcName(code)) + ": " +
                         message),
      code_(code),
      module_(std::move(module)) {}

}  // namespace faitheval
