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

#ifndef VALLEY_ERRORS_HPP_
#define VALLEY_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace valley {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateInput,
  kUnstableModel,
  kSingularEnvelope,
  kNumericFailure,
  kPeakNotFound,
  kValleyUndefined,
  kCalibrationFailure,
  kNoCrossing,
  kPreconditionViolation,
  kFormatError,
  kParseError,
  kOrderingError,
  kValidationError,
  kNoDecision,
};

const char* ErrorCodeName(ErrorCode code);

// Base class for every error raised by the library. Subclasses carry the
// payload named by the failing operation (stage index, line number, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class UnstableModelError : public Error {
 public:
  UnstableModelError(int stage, double reflection)
      : Error(ErrorCode::kUnstableModel,
              "levinson: |k| > 1 at stage " + std::to_string(stage)),
        stage_(stage),
        reflection_(reflection) {}
  int stage() const noexcept { return stage_; }
  double reflection() const noexcept { return reflection_; }

 private:
  int stage_;
  double reflection_;
};

class NumericFailureError : public Error {
 public:
  NumericFailureError(const std::string& what, int iterations)
      : Error(ErrorCode::kNumericFailure, what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class PeakNotFoundError : public Error {
 public:
  PeakNotFoundError(int formant_index, double nominal_hz)
      : Error(ErrorCode::kPeakNotFound,
              "no spectral peak near formant " + std::to_string(formant_index) +
                  " (" + std::to_string(nominal_hz) + " Hz)"),
        formant_index_(formant_index),
        nominal_hz_(nominal_hz) {}
  int formant_index() const noexcept { return formant_index_; }
  double nominal_hz() const noexcept { return nominal_hz_; }

 private:
  int formant_index_;
  double nominal_hz_;
};

class CalibrationError : public Error {
 public:
  CalibrationError(std::vector<double> best_bandwidths,
                   std::vector<double> residuals_db)
      : Error(ErrorCode::kCalibrationFailure,
              "bandwidth calibration did not reach the target levels"),
        best_bandwidths_(std::move(best_bandwidths)),
        residuals_db_(std::move(residuals_db)) {}
  const std::vector<double>& best_bandwidths() const noexcept {
    return best_bandwidths_;
  }
  const std::vector<double>& residuals_db() const noexcept {
    return residuals_db_;
  }

 private:
  std::vector<double> best_bandwidths_;
  std::vector<double> residuals_db_;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& field, const std::string& detail)
      : Error(ErrorCode::kFormatError, "format error (" + field + "): " + detail),
        field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& detail)
      : Error(ErrorCode::kParseError,
              "parse error at line " + std::to_string(line) + ": " + detail),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(int row, const std::string& detail)
      : Error(ErrorCode::kValidationError,
              "validation error at row " + std::to_string(row) + ": " + detail),
        row_(row) {}
  int row() const noexcept { return row_; }

 private:
  int row_;
};

[[noreturn]] void ThrowInvalid(const std::string& what);

}  // namespace valley

#endif  // VALLEY_ERRORS_HPP_
