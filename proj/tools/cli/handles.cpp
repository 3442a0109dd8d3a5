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
#include "cli/handles.hpp"

namespace dve::cli {

void check(dve_status status, const std::string& context) {
  if (status == DVE_OK) return;
  throw ApiError(status, context + ": " + dve_last_error());
}

BundlePtr load_bundle(const std::string& directory) {
  dve_bundle* raw = nullptr;
  check(dve_bundle_load(directory.c_str(), &raw), "cannot load bundle " + directory);
  return BundlePtr(raw);
}

}  // namespace dve::cli
