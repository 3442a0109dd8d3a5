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

#include <string>
#include <vector>

namespace dve::cli {

struct SweepEntry {
  double blur_sigma = 0.0;
  std::string predicted_label;
  long long predicted_index = 0;
  double confidence = 0.0;
  std::string overlay_path;

  bool operator==(const SweepEntry&) const = default;
};

/// Blur-sweep results, sorted ascending by blur_sigma.
struct SweepReport {
  std::vector<SweepEntry> entries;

  bool operator==(const SweepReport&) const = default;
};

std::string emit_sweep_report(const SweepReport& report);
/// Throws std::runtime_error on malformed input or unsorted entries.
SweepReport parse_sweep_report(const std::string& text);

}  // namespace dve::cli
