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

#include <memory>
#include <stdexcept>
#include <string>

#include "dve/dve.h"

namespace dve::cli {

struct BundleDeleter {
  void operator()(dve_bundle* b) const noexcept { dve_bundle_free(b); }
};
struct MapDeleter {
  void operator()(dve_map* m) const noexcept { dve_map_free(m); }
};
struct ImageDeleter {
  void operator()(dve_image* i) const noexcept { dve_image_free(i); }
};

using BundlePtr = std::unique_ptr<dve_bundle, BundleDeleter>;
using MapPtr = std::unique_ptr<dve_map, MapDeleter>;
using ImagePtr = std::unique_ptr<dve_image, ImageDeleter>;

/// A failed C API call, carrying its status and dve_last_error() text.
class ApiError : public std::runtime_error {
 public:
  ApiError(dve_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  dve_status status() const noexcept { return status_; }

 private:
  dve_status status_;
};

/// Throws ApiError unless status is DVE_OK.
void check(dve_status status, const std::string& context);

BundlePtr load_bundle(const std::string& directory);

}  // namespace dve::cli
