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

#include <iosfwd>
#include <string>
#include <vector>

namespace dve::cli {

// Process exit codes; stable so shell harnesses can assert on them.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // usage errors and anything unclassified
  kExitBadBundle = 2,
  kExitNonSquare = 3,
  kExitNoGradcamWeights = 4,
  kExitInconsistentSweep = 5,
  kExitTooFewLayers = 6,
};

/// Runs one `dve` invocation. \p args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dve::cli
