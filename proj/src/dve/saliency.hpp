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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dve/bundle.hpp"
#include "dve/spectral.hpp"
#include "dve/tensor.hpp"

namespace dve {

enum class SaliencyKind { kDve, kTargetedDve, kGradcam };

std::string_view saliency_kind_name(SaliencyKind kind) noexcept;

struct SaliencyMap {
  RealGrid values;
  std::string layer_name;
  std::size_t class_index = 0;
  SaliencyKind kind = SaliencyKind::kDve;
};

/// Pairwise attenuation built from a square map s:
///   row_energy[i] = sum_j s_ij^2
///   distance[i][j] = row_energy[i] + row_energy[j] - <row_i, row_j>
///   kernel = 1 / (1 + distance), elementwise
/// distance is symmetric and non-negative, so kernel lies in (0, 1].
struct NoiseKernel {
  std::vector<double> row_energy;
  RealGrid distance;
  RealGrid kernel;
};

NoiseKernel noise_kernel(const RealGrid& s);

/// s / kernel, evaluated as s * (1 + distance) so it never divides.
RealGrid apply_noise_filter(const RealGrid& s);

inline constexpr double kDefaultSigmaLow = 1.0;
inline constexpr double kDefaultSigmaHigh = 1.5;

struct ExplainOptions {
  bool noise_filter = true;
  /// Worker threads for the per-map terms; 0 picks hardware concurrency.
  /// The result is bit-identical for every value.
  std::size_t threads = 1;
};

/// One map's contribution: bandpass_term, then the noise filter if enabled.
RealGrid explain_term(const DftPlan& plan, const RealGrid& x, const FrequencyMask& low,
                      const FrequencyMask& high, bool noise_filter);

/// Sums explain_term over every map of the stack, in map order.
SaliencyMap explain_stack(const FeatureMapStack& stack, const FrequencyMask& low,
                          const FrequencyMask& high, const ExplainOptions& options = {},
                          std::size_t class_index = 0);

/// Second band-pass pass over an aggregate DVE map.
SaliencyMap targeted_refine(const SaliencyMap& s, const FrequencyMask& low,
                            const FrequencyMask& high);

/// max(0, sum_k w_k x_k): rectified weighted channel sum.
SaliencyMap gradcam_map(const FeatureMapStack& stack, const Tensor& weights,
                        std::size_t class_index = 0);

/// Resolves a DVE_THREADS-style request: 0 means hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested) noexcept;

}  // namespace dve
