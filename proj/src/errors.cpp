/* Copyright 2026 The Valley Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "valley/errors.hpp"

namespace valley {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateInput: return "degenerate-input";
    case ErrorCode::kUnstableModel: return "unstable-model";
    case ErrorCode::kSingularEnvelope: return "singular-envelope";
    case ErrorCode::kNumericFailure: return "numeric-failure";
    case ErrorCode::kPeakNotFound: return "peak-not-found";
    case ErrorCode::kValleyUndefined: return "valley-undefined";
    case ErrorCode::kCalibrationFailure: return "calibration-failure";
    case ErrorCode::kNoCrossing: return "no-crossing";
    case ErrorCode::kPreconditionViolation: return "precondition-violation";
    case ErrorCode::kFormatError: return "format-error";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kOrderingError: return "ordering-error";
    case ErrorCode::kValidationError: return "validation-error";
    case ErrorCode::kNoDecision: return "no-decision";
  }
  return "unknown";
}

void ThrowInvalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace valley
