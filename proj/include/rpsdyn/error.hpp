// Copyright 2026 The rpsdyn Authors.
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

#ifndef RPSDYN_ERROR_HPP_
#define RPSDYN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpsdyn {

enum class ErrorCode {
  kDimensionTooSmall,
  kNonpositiveWeight,
  kSingularSystem,
  kDimensionMismatch,
  kArithmeticOverflow,
  kConfigInvalid,
  kEmptyTrajectory,
  kNoVertexReached,
  kTooFewPhases,
  kNonpositiveRegret,
  kDimensionTooLarge,
  kTooCloseToBoundary,
  kNotOnSimplex,
  kIoError,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kNonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kEmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::kNoVertexReached: return "NoVertexReached";
    case ErrorCode::kTooFewPhases: return "TooFewPhases";
    case ErrorCode::kNonpositiveRegret: return "NonpositiveRegret";
    case ErrorCode::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::kTooCloseToBoundary: return "TooCloseToBoundary";
    case ErrorCode::kNotOnSimplex: return "NotOnSimplex";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

// All library failures are reported through this exception; `code()` is the
// stable, machine-checkable part and `what()` carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace rpsdyn

#endif  // RPSDYN_ERROR_HPP_
