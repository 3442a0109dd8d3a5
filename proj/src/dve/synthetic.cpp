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
#include "dve/synthetic.hpp"

#include <string>
#include <vector>

#include "dve/error.hpp"

namespace dve {

namespace {

std::string layer_name(std::size_t index, std::size_t count) {
  if (count <= 5) return "pool" + std::to_string(6 - count + index);
  return "layer" + std::to_string(index + 1);
}

Tensor gradient_image(std::size_t side) {
  std::vector<float> pixels(side * side * 3);
  const double span = static_cast<double>(side - 1);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      float* px = &pixels[(y * side + x) * 3];
      px[0] = static_cast<float>(x / span);
      px[1] = static_cast<float>(y / span);
      px[2] = static_cast<float>((x + y) / (2.0 * span));
    }
  }
  return Tensor({side, side, 3}, std::move(pixels));
}

}  // namespace

ExplanationBundle make_synthetic_bundle(const SyntheticOptions& o) {
  if (o.maps < 1 || o.classes < 1) {
    fail(ErrorCode::kInvalidArgument, "synthetic bundle needs K >= 1 and C >= 1");
  }
  if (o.size < 2) fail(ErrorCode::kInvalidArgument, "synthetic maps must be at least 2x2");
  if (o.layer_count < 1 || o.layer_count > 8) {
    fail(ErrorCode::kInvalidArgument, "synthetic layer count must be 1..8");
  }

  SplitMix64 rng(o.seed);
  std::vector<LayerRecord> layers;
  for (std::size_t i = 0; i < o.layer_count; ++i) {
    const std::size_t side = o.size << (o.layer_count - 1 - i);
    std::vector<float> values(o.maps * side * side);
    for (float& v : values) {
      const double u = rng.uniform();
      switch (o.content) {
        case SyntheticMaps::kRandom: v = static_cast<float>(u); break;
        case SyntheticMaps::kZero: v = 0.0f; break;
        case SyntheticMaps::kConstant: v = 0.5f; break;
      }
    }
    layers.push_back({FeatureMapStack(layer_name(i, o.layer_count),
                                      Tensor({o.maps, side, side}, std::move(values))),
                      std::nullopt});
  }

  std::vector<float> logits(o.classes);
  for (float& v : logits) v = static_cast<float>(8.0 * rng.uniform() - 4.0);

  for (auto& record : layers) {
    std::vector<float> w(o.maps, 0.0f);
    switch (o.weights) {
      case SyntheticWeights::kNone: continue;
      case SyntheticWeights::kOneHot: w[0] = 1.0f; break;
      case SyntheticWeights::kRandom:
        for (float& v : w) v = static_cast<float>(2.0 * rng.uniform() - 1.0);
        break;
    }
    record.gradcam_weights = Tensor({o.maps}, std::move(w));
  }

  std::vector<std::string> labels;
  for (std::size_t c = 0; c < o.classes; ++c) labels.push_back("class_" + std::to_string(c));

  const std::size_t image_side = o.size * 8;
  Manifest manifest;
  manifest.model_id = o.model_id;
  manifest.preprocessing.resize_height = image_side;
  manifest.preprocessing.resize_width = image_side;
  manifest.source_image = "synthetic:seed=" + std::to_string(o.seed);
  manifest.blur_sigma = o.blur_sigma;

  return ExplanationBundle(std::move(manifest), gradient_image(image_side), std::move(layers),
                           Tensor({o.classes}, std::move(logits)), std::move(labels));
}

ExplanationBundle make_synthetic_bundle(std::uint64_t seed, std::size_t k, std::size_t m,
                                        std::size_t n, std::size_t c) {
  if (m != n) fail(ErrorCode::kInvalidArgument, "synthetic maps must be square (M = N)");
  SyntheticOptions options;
  options.seed = seed;
  options.maps = k;
  options.size = m;
  options.classes = c;
  return make_synthetic_bundle(options);
}

}  // namespace dve
