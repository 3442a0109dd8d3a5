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
#include "dve/render.hpp"

#include <algorithm>
#include <cmath>

#include "dve/error.hpp"

namespace dve {

RgbImage::RgbImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h * 3, 0) {}

std::uint8_t quantize(double value) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
}

RealGrid normalize_map(const RealGrid& s) {
  RealGrid out(s.rows(), s.cols());
  if (s.size() == 0) return out;
  const double lo = s.min();
  const double hi = s.max();
  if (!(hi > lo)) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < s.size(); ++i) out.values()[i] = (s.values()[i] - lo) / range;
  return out;
}

RealGrid upsample_bilinear(const RealGrid& s, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) fail(ErrorCode::kInvalidArgument, "target size must be positive");
  if (s.size() == 0) fail(ErrorCode::kInvalidArgument, "cannot upsample an empty map");
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();

  auto source = [](std::size_t i, std::size_t from, std::size_t to) {
    const double pos = (static_cast<double>(i) + 0.5) * static_cast<double>(from) /
                           static_cast<double>(to) - 0.5;
    return std::clamp(pos, 0.0, static_cast<double>(from - 1));
  };

  RealGrid out(height, width);
  for (std::size_t i = 0; i < height; ++i) {
    const double sy = source(i, m, height);
    const auto y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, m - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t j = 0; j < width; ++j) {
      const double sx = source(j, n, width);
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, n - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = (1.0 - fx) * s(y0, x0) + fx * s(y0, x1);
      const double bottom = (1.0 - fx) * s(y1, x0) + fx * s(y1, x1);
      out(i, j) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

std::array<double, 3> colormap_jet_levels(double t) noexcept {
  t = std::clamp(t, 0.0, 1.0);
  auto channel = [t](double centre) {
    return 255.0 * std::clamp(1.5 - std::abs(4.0 * t - centre), 0.0, 1.0);
  };
  return {channel(3.0), channel(2.0), channel(1.0)};
}

Rgb colormap_jet(double t) noexcept {
  const auto levels = colormap_jet_levels(t);
  return {quantize(levels[0]), quantize(levels[1]), quantize(levels[2])};
}

RgbImage overlay(const RgbImage& image, const RealGrid& s01, double alpha) {
  if (s01.rows() != image.height || s01.cols() != image.width) {
    fail(ErrorCode::kShapeMismatch, "overlay map does not match the image size");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  RgbImage out(image.width, image.height);
  for (std::size_t r = 0; r < image.height; ++r) {
    for (std::size_t c = 0; c < image.width; ++c) {
      const auto heat = colormap_jet_levels(s01(r, c));
      const auto* src = image.at(r, c);
      auto* dst = out.at(r, c);
      for (int ch = 0; ch < 3; ++ch) {
        dst[ch] = quantize((1.0 - alpha) * src[ch] + alpha * heat[ch]);
      }
    }
  }
  return out;
}

RgbImage image_from_tensor(const Tensor& image) {
  if (image.rank() != 3 || image.extent(2) != 3) {
    fail(ErrorCode::kShapeMismatch, "image tensor must be H x W x 3");
  }
  RgbImage out(image.extent(1), image.extent(0));
  const auto values = image.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.pixels[i] = quantize(255.0 * std::clamp(static_cast<double>(values[i]), 0.0, 1.0));
  }
  return out;
}

RgbImage render_overlay(const RgbImage& image, const RealGrid& saliency, double alpha) {
  const auto scaled = upsample_bilinear(normalize_map(saliency), image.height, image.width);
  return overlay(image, scaled, alpha);
}

RgbImage hconcat(std::span<const RgbImage> tiles) {
  if (tiles.empty()) fail(ErrorCode::kInvalidArgument, "nothing to tile");
  std::size_t width = 0;
  for (const auto& tile : tiles) {
    if (tile.height != tiles.front().height) {
      fail(ErrorCode::kShapeMismatch, "tiles must share one height");
    }
    width += tile.width;
  }
  RgbImage out(width, tiles.front().height);
  std::size_t offset = 0;
  for (const auto& tile : tiles) {
    for (std::size_t r = 0; r < tile.height; ++r) {
      std::copy_n(tile.at(r, 0), tile.width * 3, out.at(r, offset));
    }
    offset += tile.width;
  }
  return out;
}

double top_decile_fraction(const RealGrid& s01) {
  if (s01.size() == 0) return 0.0;
  const auto hits = std::count_if(s01.values().begin(), s01.values().end(),
                                  [](double v) { return v >= 0.9; });
  return static_cast<double>(hits) / static_cast<double>(s01.size());
}

}  // namespace dve
