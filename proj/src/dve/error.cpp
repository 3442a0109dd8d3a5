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

#include "dve/error.hpp"

namespace dve {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kNotDvt: return "not a DVT file";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kUnsupportedVersion: return "unsupported version";
    case ErrorCode::kCorruptValues: return "corrupt values";
    case ErrorCode::kMissingFile: return "missing file";
    case ErrorCode::kBadManifest: return "bad manifest";
    case ErrorCode::kInconsistentBundle: return "inconsistent bundle";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNonSquare: return "noise kernel requires square maps";
    case ErrorCode::kNonRealInverse: return "non-real inverse";
    case ErrorCode::kMissingGradcamWeights: return "bundle lacks gradcam weights";
    case ErrorCode::kUnknownLayer: return "unknown layer";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

}  // namespace dve
