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
#include <cstdint>
#include <optional>
#include <string>

#include "dve/bundle.hpp"

namespace dve {

/// SplitMix64 (Steele, Lea & Flood). Chosen for the fixture generator because
/// it is a few lines in any language and fully determined by its seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Top 53 bits scaled into [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

enum class SyntheticMaps { kRandom, kZero, kConstant };
enum class SyntheticWeights { kRandom, kNone, kOneHot };

struct SyntheticOptions {
  std::uint64_t seed = 42;
  std::size_t maps = 8;      // K
  std::size_t size = 7;      // M = N of the deepest layer
  std::size_t classes = 10;  // C
  std::size_t layer_count = 1;
  SyntheticMaps content = SyntheticMaps::kRandom;
  SyntheticWeights weights = SyntheticWeights::kRandom;
  std::optional<double> blur_sigma;
  std::string model_id = "synthetic-splitmix64";
};

/// Deterministic fixture bundle. Draw order from a single SplitMix64 stream:
/// every layer's K*M*N values (shallow to deep, row-major, as float(u)), then
/// C logits as 8u - 4, then per-layer Grad-CAM weights as 2u - 1. Layer i of
/// L has side size * 2^(L-1-i); names are pool1..pool5 counted back from
/// pool5. The image is a size*8 square RGB gradient.
ExplanationBundle make_synthetic_bundle(const SyntheticOptions& options);

/// Single-layer ("pool5") bundle with random Grad-CAM weights.
ExplanationBundle make_synthetic_bundle(std::uint64_t seed, std::size_t k, std::size_t m,
                                        std::size_t n, std::size_t c);

}  // namespace dve
