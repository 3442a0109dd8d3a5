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
#include "cli/sweep_report.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace dve::cli {

using json = nlohmann::json;

std::string emit_sweep_report(const SweepReport& report) {
  json doc;
  doc["entries"] = json::array();
  for (const auto& e : report.entries) {
    doc["entries"].push_back({{"blur_sigma", e.blur_sigma},
                              {"predicted_label", e.predicted_label},
                              {"predicted_index", e.predicted_index},
                              {"confidence", e.confidence},
                              {"overlay_path", e.overlay_path}});
  }
  return doc.dump(2) + "\n";
}

SweepReport parse_sweep_report(const std::string& text) {
  SweepReport report;
  try {
    const auto doc = json::parse(text);
    for (const auto& item : doc.at("entries")) {
      SweepEntry e;
      e.blur_sigma = item.at("blur_sigma").get<double>();
      e.predicted_label = item.at("predicted_label").get<std::string>();
      e.predicted_index = item.at("predicted_index").get<long long>();
      e.confidence = item.at("confidence").get<double>();
      e.overlay_path = item.at("overlay_path").get<std::string>();
      if (e.confidence < 0.0 || e.confidence > 1.0) {
        throw std::runtime_error("sweep report confidence outside [0, 1]");
      }
      report.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed sweep report: ") + e.what());
  }
  const bool sorted = std::is_sorted(
      report.entries.begin(), report.entries.end(),
      [](const SweepEntry& a, const SweepEntry& b) { return a.blur_sigma < b.blur_sigma; });
  if (!sorted) throw std::runtime_error("sweep report entries are not sorted by blur_sigma");
  return report;
}

}  // namespace dve::cli
