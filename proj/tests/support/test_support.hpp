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

// Shared fixtures and independent oracles. Nothing here calls the engine's
// transform or saliency code, so the oracles stay independent of the paths
// they check.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dve/spectral.hpp"
#include "dve/tensor.hpp"

namespace dve::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_file(const std::filesystem::path& path);

RealGrid random_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                     double hi = 1.0);

/// Direct quadruple-loop evaluation of the forward DFT sum.
ComplexGrid naive_dft(const ComplexGrid& x);
ComplexGrid naive_dft(const RealGrid& x);
/// Direct evaluation of the 1/(MN)-scaled inverse sum.
ComplexGrid naive_idft(const ComplexGrid& spectrum);

/// Wrap-around Gaussian evaluated pointwise from its closed form.
RealGrid oracle_mask(std::size_t rows, std::size_t cols, double sigma);

/// Band-pass product built from naive_dft / naive_idft and oracle_mask.
RealGrid oracle_bandpass(const RealGrid& x, double sigma_low, double sigma_high);

/// s * (1 + D) with D_ij = V_i + V_j - <row_i, row_j>, by direct loops.
RealGrid oracle_noise_filter(const RealGrid& s);

/// max|a - b| / max(max|b|, floor).
double relative_error(std::span<const double> a, std::span<const double> b, double floor = 1e-300);
double relative_error(const RealGrid& a, const RealGrid& b, double floor = 1e-300);
double relative_error(const ComplexGrid& a, const ComplexGrid& b, double floor = 1e-300);
double max_abs_diff(const RealGrid& a, const RealGrid& b);

/// Reference SplitMix64 written independently of the engine's class.
std::uint64_t splitmix64_draw(std::uint64_t& state);

}  // namespace dve::testing
