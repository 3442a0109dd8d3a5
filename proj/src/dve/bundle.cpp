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
#include "dve/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dve/error.hpp"
#include "dve/fs_util.hpp"
#include "dve/tensor_io.hpp"

namespace dve {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kImageFile = "image.dvt";
constexpr const char* kLogitsFile = "logits.dvt";
constexpr const char* kLabelsFile = "labels.txt";

std::string shape_string(const Tensor::Shape& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out;
}

std::string layer_file(const std::string& name) { return name + ".dvt"; }
std::string weights_file(const std::string& name) { return name + ".gradw.dvt"; }

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> labels;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    labels.push_back(line);
  }
  return labels;
}

template <typename T>
T manifest_field(const json& object, const char* key) {
  if (!object.contains(key)) fail(ErrorCode::kBadManifest, std::string("manifest lacks '") + key + "'");
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kBadManifest, std::string("manifest field '") + key + "' has the wrong type");
  }
}

struct ManifestLayer {
  std::string name;
  std::size_t k, m, n;
  bool has_weights;
};

struct ParsedManifest {
  Manifest manifest;
  std::size_t predicted_class;
  std::vector<ManifestLayer> layers;
};

ParsedManifest parse_manifest(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kBadManifest, std::string("manifest.json is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kBadManifest, "manifest.json must hold an object");

  ParsedManifest parsed;
  auto& m = parsed.manifest;
  m.model_id = manifest_field<std::string>(doc, "model_id");
  m.source_image = manifest_field<std::string>(doc, "source_image");

  auto pre = manifest_field<json>(doc, "preprocessing");
  if (!pre.is_object()) fail(ErrorCode::kBadManifest, "'preprocessing' must be an object");
  auto resize = manifest_field<std::vector<long long>>(pre, "resize");
  auto mean = manifest_field<std::vector<double>>(pre, "mean");
  if (resize.size() != 2 || resize[0] <= 0 || resize[1] <= 0) {
    fail(ErrorCode::kBadManifest, "'preprocessing.resize' must be [H, W] with positive entries");
  }
  if (mean.size() != 3) fail(ErrorCode::kBadManifest, "'preprocessing.mean' must have 3 entries");
  m.preprocessing.resize_height = static_cast<std::size_t>(resize[0]);
  m.preprocessing.resize_width = static_cast<std::size_t>(resize[1]);
  std::copy(mean.begin(), mean.end(), m.preprocessing.mean.begin());
  m.preprocessing.raw_json = pre.dump();

  if (!doc.contains("blur_sigma")) fail(ErrorCode::kBadManifest, "manifest lacks 'blur_sigma'");
  const auto& blur = doc.at("blur_sigma");
  if (blur.is_number()) {
    m.blur_sigma = blur.get<double>();
    if (!std::isfinite(*m.blur_sigma) || *m.blur_sigma < 0) {
      fail(ErrorCode::kBadManifest, "'blur_sigma' must be a non-negative real or null");
    }
  } else if (!blur.is_null()) {
    fail(ErrorCode::kBadManifest, "'blur_sigma' must be a real or null");
  }

  auto predicted = manifest_field<long long>(doc, "predicted_class");
  if (predicted < 0) fail(ErrorCode::kBadManifest, "'predicted_class' must be non-negative");
  parsed.predicted_class = static_cast<std::size_t>(predicted);

  auto layers = manifest_field<json>(doc, "layers");
  if (!layers.is_array() || layers.empty()) {
    fail(ErrorCode::kBadManifest, "'layers' must be a non-empty array");
  }
  for (const auto& entry : layers) {
    if (!entry.is_object()) fail(ErrorCode::kBadManifest, "layer entries must be objects");
    auto dims = [&](const char* key) {
      auto v = manifest_field<long long>(entry, key);
      if (v <= 0) fail(ErrorCode::kBadManifest, std::string("layer '") + key + "' must be positive");
      return static_cast<std::size_t>(v);
    };
    parsed.layers.push_back({manifest_field<std::string>(entry, "name"), dims("k"), dims("m"),
                             dims("n"), manifest_field<bool>(entry, "gradcam_weights")});
  }
  return parsed;
}

}  // namespace

FeatureMapStack::FeatureMapStack(std::string layer_name, Tensor maps)
    : layer_name_(std::move(layer_name)), maps_(std::move(maps)) {
  if (maps_.rank() != 3) {
    fail(ErrorCode::kShapeMismatch, "layer '" + layer_name_ + "' must be K x M x N, got " +
                                        shape_string(maps_.shape()));
  }
  if (rows() < 2 || cols() < 2) {
    fail(ErrorCode::kShapeMismatch, "layer '" + layer_name_ + "' maps must be at least 2x2");
  }
}

std::span<const float> FeatureMapStack::map_values(std::size_t index) const {
  if (index >= count()) fail(ErrorCode::kInvalidArgument, "feature map index out of range");
  const auto plane = rows() * cols();
  return maps_.values().subspan(index * plane, plane);
}

RealGrid FeatureMapStack::map(std::size_t index) const {
  return RealGrid::from_floats(rows(), cols(), map_values(index));
}

std::size_t argmax(std::span<const float> values) {
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "argmax of empty sequence");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

std::vector<double> softmax(std::span<const float> logits) {
  if (logits.empty()) fail(ErrorCode::kInvalidArgument, "softmax of empty sequence");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(static_cast<double>(logits[i]) - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

bool valid_layer_name(const std::string& name) {
  if (name.empty() || name.front() == '.' || name.size() > 128) return false;
  if (name == "image" || name == "logits" || name.find(".gradw") != std::string::npos) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

ExplanationBundle::ExplanationBundle(Manifest manifest, Tensor image,
                                     std::vector<LayerRecord> layers, Tensor logits,
                                     std::vector<std::string> labels)
    : manifest_(std::move(manifest)),
      image_(std::move(image)),
      layers_(std::move(layers)),
      logits_(std::move(logits)),
      labels_(std::move(labels)) {
  if (image_.rank() != 3 || image_.extent(2) != 3) {
    fail(ErrorCode::kShapeMismatch, "image must be H x W x 3, got " + shape_string(image_.shape()));
  }
  for (float v : image_.values()) {
    if (v < 0.0f || v > 1.0f) fail(ErrorCode::kCorruptValues, "image values must lie in [0, 1]");
  }
  const auto& pre = manifest_.preprocessing;
  if (pre.resize_height != image_height() || pre.resize_width != image_width()) {
    fail(ErrorCode::kShapeMismatch, "shape mismatch: image is " + shape_string(image_.shape()) +
                                        " but manifest resize is " +
                                        std::to_string(pre.resize_height) + "x" +
                                        std::to_string(pre.resize_width));
  }
  if (layers_.empty()) fail(ErrorCode::kInconsistentBundle, "bundle has no layers");
  std::set<std::string> seen;
  for (const auto& record : layers_) {
    const auto& name = record.stack.layer_name();
    if (!valid_layer_name(name)) fail(ErrorCode::kBadManifest, "invalid layer name '" + name + "'");
    if (!seen.insert(name).second) fail(ErrorCode::kBadManifest, "duplicate layer '" + name + "'");
    if (record.gradcam_weights) {
      const auto& w = *record.gradcam_weights;
      if (w.rank() != 1 || w.extent(0) != record.stack.count()) {
        fail(ErrorCode::kShapeMismatch, "shape mismatch: gradcam weights for '" + name +
                                            "' are " + shape_string(w.shape()) + ", layer has K=" +
                                            std::to_string(record.stack.count()));
      }
    }
  }
  if (logits_.rank() != 1) fail(ErrorCode::kShapeMismatch, "logits must be a vector");
  if (labels_.size() != logits_.size()) {
    fail(ErrorCode::kShapeMismatch, "shape mismatch: " + std::to_string(labels_.size()) +
                                        " labels for " + std::to_string(logits_.size()) +
                                        " logits");
  }
  for (const auto& label : labels_) {
    if (label.find_first_of("\r\n") != std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "labels may not contain line breaks");
    }
  }
  prediction_.class_index = argmax(logits_.values());
  prediction_.label = labels_[prediction_.class_index];
  prediction_.score = softmax(logits_.values())[prediction_.class_index];
}

const LayerRecord& ExplanationBundle::layer(const std::string& name) const {
  if (name.empty()) return layers_.back();
  for (const auto& record : layers_) {
    if (record.stack.layer_name() == name) return record;
  }
  fail(ErrorCode::kUnknownLayer, "bundle has no layer '" + name + "'");
}

ExplanationBundle load_bundle(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    fail(ErrorCode::kMissingFile, "bundle directory not found: " + directory.string());
  }
  auto parsed = parse_manifest(read_file_text(directory / kManifestFile));

  auto image = read_tensor_file(directory / kImageFile);
  auto logits = read_tensor_file(directory / kLogitsFile);
  auto labels = split_labels(read_file_text(directory / kLabelsFile));

  std::vector<LayerRecord> layers;
  for (const auto& entry : parsed.layers) {
    if (!valid_layer_name(entry.name)) {
      fail(ErrorCode::kBadManifest, "invalid layer name '" + entry.name + "'");
    }
    auto maps = read_tensor_file(directory / layer_file(entry.name));
    const Tensor::Shape expected{entry.k, entry.m, entry.n};
    if (maps.shape() != expected) {
      fail(ErrorCode::kShapeMismatch, "shape mismatch: " + layer_file(entry.name) + " is " +
                                          shape_string(maps.shape()) + ", manifest says " +
                                          shape_string(expected));
    }
    std::optional<Tensor> weights;
    if (entry.has_weights) weights = read_tensor_file(directory / weights_file(entry.name));
    layers.push_back({FeatureMapStack(entry.name, std::move(maps)), std::move(weights)});
  }

  ExplanationBundle bundle(std::move(parsed.manifest), std::move(image), std::move(layers),
                           std::move(logits), std::move(labels));
  if (bundle.prediction().class_index != parsed.predicted_class) {
    fail(ErrorCode::kInconsistentBundle,
         "inconsistent bundle: manifest predicts class " + std::to_string(parsed.predicted_class) +
             " but argmax(logits) is " + std::to_string(bundle.prediction().class_index));
  }
  return bundle;
}

void write_bundle(const ExplanationBundle& bundle, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + directory.string() + ": " + ec.message());

  const auto& m = bundle.manifest();
  json pre;
  if (!m.preprocessing.raw_json.empty()) {
    pre = json::parse(m.preprocessing.raw_json);
  } else {
    pre["resize"] = {m.preprocessing.resize_height, m.preprocessing.resize_width};
    pre["mean"] = m.preprocessing.mean;
  }
  json doc;
  doc["model_id"] = m.model_id;
  doc["preprocessing"] = pre;
  doc["source_image"] = m.source_image;
  doc["blur_sigma"] = m.blur_sigma ? json(*m.blur_sigma) : json(nullptr);
  doc["predicted_class"] = bundle.prediction().class_index;
  doc["layers"] = json::array();
  for (const auto& record : bundle.layers()) {
    const auto& s = record.stack;
    doc["layers"].push_back({{"name", s.layer_name()},
                             {"k", s.count()},
                             {"m", s.rows()},
                             {"n", s.cols()},
                             {"gradcam_weights", record.gradcam_weights.has_value()}});
  }

  write_tensor_file(bundle.image(), directory / kImageFile);
  write_tensor_file(bundle.logits(), directory / kLogitsFile);
  std::string labels;
  for (const auto& label : bundle.labels()) labels += label + "\n";
  write_file_atomic(directory / kLabelsFile, labels);
  for (const auto& record : bundle.layers()) {
    write_tensor_file(record.stack.maps(), directory / layer_file(record.stack.layer_name()));
    if (record.gradcam_weights) {
      write_tensor_file(*record.gradcam_weights,
                        directory / weights_file(record.stack.layer_name()));
    }
  }
  // Manifest last: a directory without one is never mistaken for a bundle.
  write_file_atomic(directory / kManifestFile, doc.dump(2) + "\n");
}

}  // namespace dve
