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
#include "dve/dve.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dve/bundle.hpp"
#include "dve/error.hpp"
#include "dve/render.hpp"
#include "dve/saliency.hpp"
#include "dve/spectral.hpp"
#include "dve/synthetic.hpp"
#include "dve/tensor_io.hpp"

struct dve_bundle {
  dve::ExplanationBundle bundle;
  dve::RgbImage image;  // 8-bit copy of bundle.image(), cached for overlays
};

struct dve_map {
  dve::SaliencyMap map;
};

struct dve_image {
  dve::RgbImage image;
};

namespace {

thread_local std::string g_last_error;

dve_status record(dve_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
dve_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return DVE_OK;
  } catch (const dve::Error& e) {
    return record(static_cast<dve_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(DVE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DVE_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(DVE_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool condition, const char* what) {
  if (!condition) dve::fail(dve::ErrorCode::kInvalidArgument, what);
}

std::string layer_arg(const char* layer) { return layer ? std::string(layer) : std::string(); }

std::unique_ptr<dve_bundle> wrap(dve::ExplanationBundle bundle) {
  auto image = dve::image_from_tensor(bundle.image());
  return std::unique_ptr<dve_bundle>(new dve_bundle{std::move(bundle), std::move(image)});
}

}  // namespace

extern "C" {

const char* dve_version(void) { return "0.1.0"; }

const char* dve_status_string(dve_status status) {
  if (status == DVE_OK) return "ok";
  if (status < DVE_ERR_INVALID_ARGUMENT || status > DVE_ERR_INTERNAL) return "unknown status";
  return dve::error_code_name(static_cast<dve::ErrorCode>(status)).data();
}

const char* dve_last_error(void) { return g_last_error.c_str(); }

void dve_explain_options_init(dve_explain_options* options) {
  if (!options) return;
  options->sigma_low = dve::kDefaultSigmaLow;
  options->sigma_high = dve::kDefaultSigmaHigh;
  options->noise_filter = 1;
  options->threads = 1;
}

void dve_synthetic_options_init(dve_synthetic_options* options) {
  if (!options) return;
  const dve::SyntheticOptions defaults;
  options->seed = defaults.seed;
  options->maps = defaults.maps;
  options->size = defaults.size;
  options->classes = defaults.classes;
  options->layer_count = defaults.layer_count;
  options->content = DVE_SYNTH_MAPS_RANDOM;
  options->weights = DVE_SYNTH_WEIGHTS_RANDOM;
  options->has_blur_sigma = 0;
  options->blur_sigma = 0.0;
  options->model_id = nullptr;
}

dve_status dve_bundle_load(const char* directory, dve_bundle** out) {
  return guarded([&] {
    require(directory && out, "dve_bundle_load: null argument");
    *out = wrap(dve::load_bundle(directory)).release();
  });
}

dve_status dve_bundle_synthetic(const dve_synthetic_options* options, dve_bundle** out) {
  return guarded([&] {
    require(options && out, "dve_bundle_synthetic: null argument");
    dve::SyntheticOptions o;
    o.seed = options->seed;
    o.maps = options->maps;
    o.size = options->size;
    o.classes = options->classes;
    o.layer_count = options->layer_count;
    switch (options->content) {
      case DVE_SYNTH_MAPS_RANDOM: o.content = dve::SyntheticMaps::kRandom; break;
      case DVE_SYNTH_MAPS_ZERO: o.content = dve::SyntheticMaps::kZero; break;
      case DVE_SYNTH_MAPS_CONSTANT: o.content = dve::SyntheticMaps::kConstant; break;
      default: require(false, "unknown synthetic map content");
    }
    switch (options->weights) {
      case DVE_SYNTH_WEIGHTS_RANDOM: o.weights = dve::SyntheticWeights::kRandom; break;
      case DVE_SYNTH_WEIGHTS_NONE: o.weights = dve::SyntheticWeights::kNone; break;
      case DVE_SYNTH_WEIGHTS_ONE_HOT: o.weights = dve::SyntheticWeights::kOneHot; break;
      default: require(false, "unknown synthetic weights mode");
    }
    if (options->has_blur_sigma) o.blur_sigma = options->blur_sigma;
    if (options->model_id) o.model_id = options->model_id;
    *out = wrap(dve::make_synthetic_bundle(o)).release();
  });
}

dve_status dve_bundle_write(const dve_bundle* bundle, const char* directory) {
  return guarded([&] {
    require(bundle && directory, "dve_bundle_write: null argument");
    dve::write_bundle(bundle->bundle, directory);
  });
}

void dve_bundle_free(dve_bundle* bundle) { delete bundle; }

const char* dve_bundle_model_id(const dve_bundle* bundle) {
  return bundle ? bundle->bundle.manifest().model_id.c_str() : "";
}

int dve_bundle_blur_sigma(const dve_bundle* bundle, double* sigma) {
  if (!bundle || !bundle->bundle.manifest().blur_sigma) return 0;
  if (sigma) *sigma = *bundle->bundle.manifest().blur_sigma;
  return 1;
}

size_t dve_bundle_class_count(const dve_bundle* bundle) {
  return bundle ? bundle->bundle.labels().size() : 0;
}

const char* dve_bundle_label(const dve_bundle* bundle, size_t class_index) {
  if (!bundle || class_index >= bundle->bundle.labels().size()) return nullptr;
  return bundle->bundle.labels()[class_index].c_str();
}

void dve_bundle_prediction(const dve_bundle* bundle, size_t* class_index, double* score) {
  if (!bundle) return;
  if (class_index) *class_index = bundle->bundle.prediction().class_index;
  if (score) *score = bundle->bundle.prediction().score;
}

dve_status dve_bundle_softmax(const dve_bundle* bundle, double* probabilities, size_t count) {
  return guarded([&] {
    require(bundle && probabilities, "dve_bundle_softmax: null argument");
    const auto p = dve::softmax(bundle->bundle.logits().values());
    require(count == p.size(), "dve_bundle_softmax: count must equal the class count");
    std::copy(p.begin(), p.end(), probabilities);
  });
}

void dve_bundle_image_size(const dve_bundle* bundle, size_t* height, size_t* width) {
  if (!bundle) return;
  if (height) *height = bundle->bundle.image_height();
  if (width) *width = bundle->bundle.image_width();
}

size_t dve_bundle_layer_count(const dve_bundle* bundle) {
  return bundle ? bundle->bundle.layers().size() : 0;
}

const char* dve_bundle_layer_name(const dve_bundle* bundle, size_t index) {
  if (!bundle || index >= bundle->bundle.layers().size()) return nullptr;
  return bundle->bundle.layers()[index].stack.layer_name().c_str();
}

dve_status dve_bundle_layer_shape(const dve_bundle* bundle, size_t index, size_t* k, size_t* m,
                                  size_t* n) {
  return guarded([&] {
    require(bundle != nullptr, "dve_bundle_layer_shape: null bundle");
    require(index < bundle->bundle.layers().size(), "layer index out of range");
    const auto& stack = bundle->bundle.layers()[index].stack;
    if (k) *k = stack.count();
    if (m) *m = stack.rows();
    if (n) *n = stack.cols();
  });
}

int dve_bundle_layer_has_gradcam(const dve_bundle* bundle, size_t index) {
  if (!bundle || index >= bundle->bundle.layers().size()) return 0;
  return bundle->bundle.layers()[index].gradcam_weights.has_value() ? 1 : 0;
}

dve_status dve_explain(const dve_bundle* bundle, const char* layer,
                       const dve_explain_options* options, dve_map** out) {
  return guarded([&] {
    require(bundle && out, "dve_explain: null argument");
    dve_explain_options defaults;
    dve_explain_options_init(&defaults);
    const auto& o = options ? *options : defaults;
    const auto& stack = bundle->bundle.layer(layer_arg(layer)).stack;
    const auto low = dve::gaussian_mask(stack.rows(), stack.cols(), o.sigma_low);
    const auto high = dve::gaussian_mask(stack.rows(), stack.cols(), o.sigma_high);
    dve::ExplainOptions eo;
    eo.noise_filter = o.noise_filter != 0;
    eo.threads = o.threads;
    auto map = dve::explain_stack(stack, low, high, eo, bundle->bundle.prediction().class_index);
    *out = new dve_map{std::move(map)};
  });
}

dve_status dve_targeted_refine(const dve_map* map, double sigma_low, double sigma_high,
                               dve_map** out) {
  return guarded([&] {
    require(map && out, "dve_targeted_refine: null argument");
    const auto& grid = map->map.values;
    const auto low = dve::gaussian_mask(grid.rows(), grid.cols(), sigma_low);
    const auto high = dve::gaussian_mask(grid.rows(), grid.cols(), sigma_high);
    *out = new dve_map{dve::targeted_refine(map->map, low, high)};
  });
}

dve_status dve_gradcam(const dve_bundle* bundle, const char* layer, dve_map** out) {
  return guarded([&] {
    require(bundle && out, "dve_gradcam: null argument");
    const auto& record = bundle->bundle.layer(layer_arg(layer));
    if (!record.gradcam_weights) {
      dve::fail(dve::ErrorCode::kMissingGradcamWeights,
                "bundle lacks gradcam weights for layer '" + record.stack.layer_name() + "'");
    }
    *out = new dve_map{dve::gradcam_map(record.stack, *record.gradcam_weights,
                                        bundle->bundle.prediction().class_index)};
  });
}

void dve_map_free(dve_map* map) { delete map; }

void dve_map_shape(const dve_map* map, size_t* rows, size_t* cols) {
  if (!map) return;
  if (rows) *rows = map->map.values.rows();
  if (cols) *cols = map->map.values.cols();
}

const double* dve_map_values(const dve_map* map) {
  return map ? map->map.values.values().data() : nullptr;
}

dve_map_kind dve_map_kind_of(const dve_map* map) {
  if (!map) return DVE_MAP_DVE;
  switch (map->map.kind) {
    case dve::SaliencyKind::kDve: return DVE_MAP_DVE;
    case dve::SaliencyKind::kTargetedDve: return DVE_MAP_TARGETED_DVE;
    case dve::SaliencyKind::kGradcam: return DVE_MAP_GRADCAM;
  }
  return DVE_MAP_DVE;
}

const char* dve_map_layer(const dve_map* map) { return map ? map->map.layer_name.c_str() : ""; }

dve_status dve_map_write_dvt(const dve_map* map, const char* path) {
  return guarded([&] {
    require(map && path, "dve_map_write_dvt: null argument");
    dve::write_tensor_file(map->map.values.to_tensor(), path);
  });
}

dve_status dve_render_overlay(const dve_bundle* bundle, const dve_map* map, double alpha,
                              dve_image** out) {
  return guarded([&] {
    require(bundle && map && out, "dve_render_overlay: null argument");
    *out = new dve_image{dve::render_overlay(bundle->image, map->map.values, alpha)};
  });
}

dve_status dve_map_top_decile_fraction(const dve_bundle* bundle, const dve_map* map,
                                       double* fraction) {
  return guarded([&] {
    require(bundle && map && fraction, "dve_map_top_decile_fraction: null argument");
    const auto scaled = dve::upsample_bilinear(dve::normalize_map(map->map.values),
                                               bundle->image.height, bundle->image.width);
    *fraction = dve::top_decile_fraction(scaled);
  });
}

dve_status dve_image_hconcat(const dve_image* const* tiles, size_t count, dve_image** out) {
  return guarded([&] {
    require(tiles && out, "dve_image_hconcat: null argument");
    std::vector<dve::RgbImage> images;
    images.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(tiles[i] != nullptr, "dve_image_hconcat: null tile");
      images.push_back(tiles[i]->image);
    }
    *out = new dve_image{dve::hconcat(images)};
  });
}

dve_status dve_image_write_png(const dve_image* image, const char* path) {
  return guarded([&] {
    require(image && path, "dve_image_write_png: null argument");
    dve::write_png(image->image, path);
  });
}

void dve_image_size(const dve_image* image, size_t* width, size_t* height) {
  if (!image) return;
  if (width) *width = image->image.width;
  if (height) *height = image->image.height;
}

const uint8_t* dve_image_pixels(const dve_image* image) {
  return image ? image->image.pixels.data() : nullptr;
}

void dve_image_free(dve_image* image) { delete image; }

}  // extern "C"
