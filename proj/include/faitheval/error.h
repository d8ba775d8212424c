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

#ifndef FAITHEVAL_ERROR_H_
#define FAITHEVAL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace faitheval {

// Every failure the toolkit reports. The CLI maps these onto exit codes
// through ExitCodeFor().
enum class Errc {
  // Configuration.
  kConfig,
  kIo,
  // Data validation.
  kParse,
  kDuplicateKey,
  kEmptyField,
  kSpanOutOfRange,
  kOverlappingSpans,
  kUnknownSystem,
  kSpanCoversNoToken,
  kIncompleteAnnotation,
  kInsufficientRaters,
  kRaggedCounts,
  kDegenerateSeries,
  kMissingReference,
  kSchema,
  kProbabilityNotNormalized,
  kMissingScore,
  kNoCandidates,
  kMissingAnnotation,
  kFoldLeakage,
  kMissingFold,
  kMissingDocument,
  kNoQuestions,
  // Annotation service.
  kUnknownPair,
  kUnknownTask,
  kFilterViolation,
  kNotAssigned,
  kIllegalLabel,
  kAlreadySubmitted,
  kWrongTaskType,
  // Scorer backends.
  kEndpointUnavailable,
  kInvalidResponse,
};

std::string_view ErrcName(Errc code);

// Process exit status: 1 config, 2 data, 3 scorer backend.
int ExitCodeFor(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string module, const std::string& message);

  Errc code() const { return code_; }
  const std::string& module() const { return module_; }

 private:
  Errc code_;
  std::string module_;
};

}  // namespace faitheval

#endif  // FAITHEVAL_ERROR_H_
