// Copyright 2026 The padmm Authors.
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

#ifndef PADMM_ERROR_H_
#define PADMM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace padmm {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotSpd,
  kDegenerateSystem,
  kUnsupported,
  kNotStandardForm,
  kBadEta,
  kEmptyInterval,
  kEtaOutsideInterval,
  kZeroSigma,
  kBadAlpha,
  kWeakConvexityPreconditionViolated,
  kNonQuadratic,
  kCovarianceMismatch,
  kNotConverged,
  kNeverConverged,
  kDegenerateSamples,
  kTapeExhausted,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotSpd: return "NotSPD";
    case ErrorCode::kDegenerateSystem: return "DegenerateSystem";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kNotStandardForm: return "NotStandardForm";
    case ErrorCode::kBadEta: return "BadEta";
    case ErrorCode::kEmptyInterval: return "EmptyInterval";
    case ErrorCode::kEtaOutsideInterval: return "EtaOutsideInterval";
    case ErrorCode::kZeroSigma: return "ZeroSigma";
    case ErrorCode::kBadAlpha: return "BadAlpha";
    case ErrorCode::kWeakConvexityPreconditionViolated:
      return "WeakConvexityPreconditionViolated";
    case ErrorCode::kNonQuadratic: return "NonQuadratic";
    case ErrorCode::kCovarianceMismatch: return "CovarianceMismatch";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kNeverConverged: return "NeverConverged";
    case ErrorCode::kDegenerateSamples: return "DegenerateSamples";
    case ErrorCode::kTapeExhausted: return "TapeExhausted";
  }
  return "Unknown";
}

// Every failure in the library is reported by throwing this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void Require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace padmm

#endif  // PADMM_ERROR_H_
