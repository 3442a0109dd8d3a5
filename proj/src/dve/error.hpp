// Copyright 2026 The DVE Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dve {

// Numeric values are mirrored by dve_status in <dve/dve.h>; keep them in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kNotDvt = 3,
  kTruncated = 4,
  kUnsupportedVersion = 5,
  kCorruptValues = 6,
  kMissingFile = 7,
  kBadManifest = 8,
  kInconsistentBundle = 9,
  kShapeMismatch = 10,
  kNonSquare = 11,
  kNonRealInverse = 12,
  kMissingGradcamWeights = 13,
  kUnknownLayer = 14,
  kInternal = 15,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dve
