// Copyright 2026 The pridec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIDEC_ERROR_H_
#define PRIDEC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pridec {

enum class ErrorCode {
  kSpaceMismatch,
  kAbsoluteContinuity,
  kRange,
  kNotDp,
  kInstanceTooLarge,
  kInvalidPartition,
  kEmptyClass,
  kNotFound,
  kConfig,
  kInfeasible,
  kStructure,
  kProtocol,
  kNonConvergence,
  kValidation,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code lets
// callers (and the CLI exit-code mapping) distinguish failure classes without
// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSpaceMismatch:
      return "SpaceMismatch";
    case ErrorCode::kAbsoluteContinuity:
      return "AbsoluteContinuityError";
    case ErrorCode::kRange:
      return "RangeError";
    case ErrorCode::kNotDp:
      return "NotDP";
    case ErrorCode::kInstanceTooLarge:
      return "InstanceTooLarge";
    case ErrorCode::kInvalidPartition:
      return "InvalidPartition";
    case ErrorCode::kEmptyClass:
      return "EmptyClass";
    case ErrorCode::kNotFound:
      return "NotFound";
    case ErrorCode::kConfig:
      return "ConfigError";
    case ErrorCode::kInfeasible:
      return "Infeasible";
    case ErrorCode::kStructure:
      return "StructureError";
    case ErrorCode::kProtocol:
      return "ProtocolError";
    case ErrorCode::kNonConvergence:
      return "NonConvergence";
    case ErrorCode::kValidation:
      return "ValidationError";
  }
  return "Unknown";
}

}  // namespace pridec

#endif  // PRIDEC_ERROR_H_
