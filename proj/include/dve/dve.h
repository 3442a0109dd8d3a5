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
/*
 * C interface to the DVE saliency engine.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a dve_status; on
 * failure, dve_last_error() describes the cause for the calling thread until
 * its next failing call. Handles are immutable once created and may be read
 * from several threads at once.
 */
#ifndef DVE_DVE_H_
#define DVE_DVE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DVE_BUILDING_LIBRARY)
#define DVE_API __attribute__((visibility("default")))
#else
#define DVE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dve_status {
  DVE_OK = 0,
  DVE_ERR_INVALID_ARGUMENT = 1,
  DVE_ERR_IO = 2,
  DVE_ERR_NOT_DVT = 3,
  DVE_ERR_TRUNCATED = 4,
  DVE_ERR_UNSUPPORTED_VERSION = 5,
  DVE_ERR_CORRUPT_VALUES = 6,
  DVE_ERR_MISSING_FILE = 7,
  DVE_ERR_BAD_MANIFEST = 8,
  DVE_ERR_INCONSISTENT_BUNDLE = 9,
  DVE_ERR_SHAPE_MISMATCH = 10,
  DVE_ERR_NON_SQUARE = 11,
  DVE_ERR_NON_REAL_INVERSE = 12,
  DVE_ERR_MISSING_GRADCAM_WEIGHTS = 13,
  DVE_ERR_UNKNOWN_LAYER = 14,
  DVE_ERR_INTERNAL = 15
} dve_status;

typedef enum dve_map_kind {
  DVE_MAP_DVE = 0,
  DVE_MAP_TARGETED_DVE = 1,
  DVE_MAP_GRADCAM = 2
} dve_map_kind;

typedef enum dve_synthetic_maps {
  DVE_SYNTH_MAPS_RANDOM = 0,
  DVE_SYNTH_MAPS_ZERO = 1,
  DVE_SYNTH_MAPS_CONSTANT = 2
} dve_synthetic_maps;

typedef enum dve_synthetic_weights {
  DVE_SYNTH_WEIGHTS_RANDOM = 0,
  DVE_SYNTH_WEIGHTS_NONE = 1,
  DVE_SYNTH_WEIGHTS_ONE_HOT = 2
} dve_synthetic_weights;

typedef struct dve_bundle dve_bundle;
typedef struct dve_map dve_map;
typedef struct dve_image dve_image;

typedef struct dve_explain_options {
  double sigma_low;   /* low-pass Gaussian width, frequency bins */
  double sigma_high;  /* high-pass notch width, frequency bins */
  int noise_filter;   /* nonzero: filter every per-map term before summing */
  size_t threads;     /* 0 = hardware concurrency */
} dve_explain_options;

typedef struct dve_synthetic_options {
  uint64_t seed;
  size_t maps;        /* K */
  size_t size;        /* M = N of the deepest layer */
  size_t classes;     /* C */
  size_t layer_count;
  dve_synthetic_maps content;
  dve_synthetic_weights weights;
  int has_blur_sigma;
  double blur_sigma;
  const char* model_id; /* NULL keeps the default */
} dve_synthetic_options;

DVE_API const char* dve_version(void);
DVE_API const char* dve_status_string(dve_status status);
DVE_API const char* dve_last_error(void);

DVE_API void dve_explain_options_init(dve_explain_options* options);
DVE_API void dve_synthetic_options_init(dve_synthetic_options* options);

/* Bundles */
DVE_API dve_status dve_bundle_load(const char* directory, dve_bundle** out);
DVE_API dve_status dve_bundle_synthetic(const dve_synthetic_options* options, dve_bundle** out);
DVE_API dve_status dve_bundle_write(const dve_bundle* bundle, const char* directory);
DVE_API void dve_bundle_free(dve_bundle* bundle);

DVE_API const char* dve_bundle_model_id(const dve_bundle* bundle);
/* Returns 1 and stores sigma when the manifest records one, else 0. */
DVE_API int dve_bundle_blur_sigma(const dve_bundle* bundle, double* sigma);
DVE_API size_t dve_bundle_class_count(const dve_bundle* bundle);
DVE_API const char* dve_bundle_label(const dve_bundle* bundle, size_t class_index);
DVE_API void dve_bundle_prediction(const dve_bundle* bundle, size_t* class_index, double* score);
DVE_API dve_status dve_bundle_softmax(const dve_bundle* bundle, double* probabilities, size_t count);
DVE_API void dve_bundle_image_size(const dve_bundle* bundle, size_t* height, size_t* width);
DVE_API size_t dve_bundle_layer_count(const dve_bundle* bundle);
DVE_API const char* dve_bundle_layer_name(const dve_bundle* bundle, size_t index);
DVE_API dve_status dve_bundle_layer_shape(const dve_bundle* bundle, size_t index, size_t* k,
                                          size_t* m, size_t* n);
DVE_API int dve_bundle_layer_has_gradcam(const dve_bundle* bundle, size_t index);

/* Saliency. layer may be NULL or "" to select the deepest layer. */
DVE_API dve_status dve_explain(const dve_bundle* bundle, const char* layer,
                               const dve_explain_options* options, dve_map** out);
DVE_API dve_status dve_targeted_refine(const dve_map* map, double sigma_low, double sigma_high,
                                       dve_map** out);
DVE_API dve_status dve_gradcam(const dve_bundle* bundle, const char* layer, dve_map** out);
DVE_API void dve_map_free(dve_map* map);

DVE_API void dve_map_shape(const dve_map* map, size_t* rows, size_t* cols);
DVE_API const double* dve_map_values(const dve_map* map);
DVE_API dve_map_kind dve_map_kind_of(const dve_map* map);
DVE_API const char* dve_map_layer(const dve_map* map);
/* Writes the map as a rank-2 DVT tensor (narrowed to f32). */
DVE_API dve_status dve_map_write_dvt(const dve_map* map, const char* path);

/* Rendering */
DVE_API dve_status dve_render_overlay(const dve_bundle* bundle, const dve_map* map, double alpha,
                                      dve_image** out);
/* Share of image pixels whose normalized, upsampled saliency is >= 0.9. */
DVE_API dve_status dve_map_top_decile_fraction(const dve_bundle* bundle, const dve_map* map,
                                               double* fraction);
DVE_API dve_status dve_image_hconcat(const dve_image* const* tiles, size_t count, dve_image** out);
DVE_API dve_status dve_image_write_png(const dve_image* image, const char* path);
DVE_API void dve_image_size(const dve_image* image, size_t* width, size_t* height);
DVE_API const uint8_t* dve_image_pixels(const dve_image* image);
DVE_API void dve_image_free(dve_image* image);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* DVE_DVE_H_ */
