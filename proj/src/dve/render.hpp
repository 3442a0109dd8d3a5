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
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dve/tensor.hpp"

namespace dve {

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB triples

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h);

  std::uint8_t* at(std::size_t row, std::size_t col) { return &pixels[(row * width + col) * 3]; }
  const std::uint8_t* at(std::size_t row, std::size_t col) const {
    return &pixels[(row * width + col) * 3];
  }

  bool operator==(const RgbImage&) const = default;
};

using Rgb = std::array<std::uint8_t, 3>;

/// Round-half-up quantization of a 0..255 real.
std::uint8_t quantize(double value) noexcept;

/// Min-max scaling to [0, 1]; a constant map becomes all zeros.
RealGrid normalize_map(const RealGrid& s);

/// Bilinear resampling with pixel-centre alignment and border clamping.
RealGrid upsample_bilinear(const RealGrid& s, std::size_t height, std::size_t width);

/// Unquantized jet colour in 0..255 per channel; t is clamped to [0, 1].
std::array<double, 3> colormap_jet_levels(double t) noexcept;
Rgb colormap_jet(double t) noexcept;

/// out = round((1 - alpha) * image + alpha * jet(s01)) per channel. The jet
/// term is blended before quantization, so only one rounding happens.
RgbImage overlay(const RgbImage& image, const RealGrid& s01, double alpha);

/// H x W x 3 tensor in [0, 1] to 8-bit RGB.
RgbImage image_from_tensor(const Tensor& image);

/// normalize -> upsample to the image size -> overlay.
RgbImage render_overlay(const RgbImage& image, const RealGrid& saliency, double alpha);

/// Tiles images left to right; all must share one height.
RgbImage hconcat(std::span<const RgbImage> tiles);

/// Fraction of entries of a [0, 1] map that are >= 0.9.
double top_decile_fraction(const RealGrid& s01);

std::vector<std::byte> encode_png(const RgbImage& image);
void write_png(const RgbImage& image, const std::filesystem::path& path);

}  // namespace dve
