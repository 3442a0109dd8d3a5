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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dve/tensor.hpp"

namespace dve {

/// K feature maps of one convolutional or pooling layer, stored K x M x N.
class FeatureMapStack {
 public:
  FeatureMapStack(std::string layer_name, Tensor maps);

  const std::string& layer_name() const noexcept { return layer_name_; }
  const Tensor& maps() const noexcept { return maps_; }

  std::size_t count() const noexcept { return maps_.extent(0); }
  std::size_t rows() const noexcept { return maps_.extent(1); }
  std::size_t cols() const noexcept { return maps_.extent(2); }
  bool square() const noexcept { return rows() == cols(); }

  std::span<const float> map_values(std::size_t index) const;
  RealGrid map(std::size_t index) const;

 private:
  std::string layer_name_;
  Tensor maps_;
};

struct ClassPrediction {
  std::size_t class_index = 0;
  std::string label;
  double score = 0.0;  // softmax confidence of class_index
};

struct Preprocessing {
  std::size_t resize_height = 0;
  std::size_t resize_width = 0;
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  /// The exporter's preprocessing object verbatim (compact JSON). Empty when
  /// the bundle was built in-process; the fields above are then authoritative.
  std::string raw_json;
};

struct Manifest {
  std::string model_id;
  Preprocessing preprocessing;
  std::string source_image;
  std::optional<double> blur_sigma;
};

struct LayerRecord {
  FeatureMapStack stack;
  std::optional<Tensor> gradcam_weights;  // length K when present
};

/// Everything needed to explain one classification. Constructed only through
/// the validating constructor, so every instance satisfies the bundle
/// invariants and prediction() is derived from the logits.
class ExplanationBundle {
 public:
  ExplanationBundle(Manifest manifest, Tensor image, std::vector<LayerRecord> layers,
                    Tensor logits, std::vector<std::string> labels);

  const Manifest& manifest() const noexcept { return manifest_; }
  const Tensor& image() const noexcept { return image_; }
  std::size_t image_height() const noexcept { return image_.extent(0); }
  std::size_t image_width() const noexcept { return image_.extent(1); }
  const std::vector<LayerRecord>& layers() const noexcept { return layers_; }
  const Tensor& logits() const noexcept { return logits_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const ClassPrediction& prediction() const noexcept { return prediction_; }

  /// Looks a layer up by name; an empty name selects the last (deepest) layer.
  const LayerRecord& layer(const std::string& name) const;

 private:
  Manifest manifest_;
  Tensor image_;
  std::vector<LayerRecord> layers_;
  Tensor logits_;
  std::vector<std::string> labels_;
  ClassPrediction prediction_;
};

/// Index of the first maximum.
std::size_t argmax(std::span<const float> values);
/// Softmax with max subtraction, computed in double.
std::vector<double> softmax(std::span<const float> logits);

/// Layer names become file names, so they are restricted to [A-Za-z0-9_.-].
bool valid_layer_name(const std::string& name);

ExplanationBundle load_bundle(const std::filesystem::path& directory);
void write_bundle(const ExplanationBundle& bundle, const std::filesystem::path& directory);

}  // namespace dve
