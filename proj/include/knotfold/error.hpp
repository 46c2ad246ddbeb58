// Copyright 2026 The knotfold Authors
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

#ifndef KNOTFOLD_ERROR_HPP_
#define KNOTFOLD_ERROR_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace knotfold {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kDegenerate,        // taut or overflowing catenary
  kTaut,              // cable shorter than the chord it must span
  kNotFound,
  kDisconnected,
  kNoEligibleCorner,
  kDegenerateCrossing,
  kConvergence,
  kFloor,             // plane or waypoint at or below the floor
  kOutOfRange,
  kIo,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kTaut: return "taut";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kDisconnected: return "disconnected";
    case ErrorCode::kNoEligibleCorner: return "no-eligible-corner";
    case ErrorCode::kDegenerateCrossing: return "degenerate-crossing";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kFloor: return "floor";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace knotfold

#endif  // KNOTFOLD_ERROR_HPP_
