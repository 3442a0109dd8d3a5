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

#include <complex>
#include <cstddef>
#include <vector>

#include "dve/tensor.hpp"

namespace dve {

using Complex = std::complex<double>;

class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::vector<Complex>& values() noexcept { return values_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> values_;
};

/// Whether idft2d should verify that the inverse is real up to round-off.
enum class InverseCheck { kNone, kRealOrigin };

/// Unnormalized forward / 1/(MN)-normalized inverse 2D DFT for one M x N size.
///
/// Runs as two passes of 1D DFTs (rows, then columns) over precomputed
/// twiddle tables, O(MN(M+N)). Works for every size, including the
/// non-power-of-two 7x7 and 14x14 grids that dominate real workloads.
/// Immutable after construction; one plan may be shared across threads.
class DftPlan {
 public:
  DftPlan(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  ComplexGrid forward(const RealGrid& x) const;
  ComplexGrid forward(const ComplexGrid& x) const;
  ComplexGrid inverse(const ComplexGrid& spectrum) const;
  /// Real part of the inverse. With kRealOrigin, throws kNonRealInverse when
  /// max|imag| exceeds 1e-6 * (1 + max|real|).
  RealGrid inverse_real(const ComplexGrid& spectrum, InverseCheck check) const;

 private:
  void transform(ComplexGrid& grid, bool inverse) const;

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> row_twiddles_;  // exp(-2 pi i t / rows)
  std::vector<Complex> col_twiddles_;  // exp(-2 pi i t / cols)
};

ComplexGrid dft2d(const RealGrid& x);
RealGrid idft2d(const ComplexGrid& spectrum, InverseCheck check = InverseCheck::kRealOrigin);

/// Isotropic frequency-domain Gaussian with wrap-around bin distances, so it
/// is centred on the DC bin of an unshifted spectrum.
class FrequencyMask {
 public:
  FrequencyMask(std::size_t rows, std::size_t cols, double sigma);

  double sigma() const noexcept { return sigma_; }
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  const RealGrid& values() const noexcept { return values_; }
  double operator()(std::size_t u, std::size_t v) const { return values_(u, v); }

 private:
  double sigma_;
  RealGrid values_;
};

FrequencyMask gaussian_mask(std::size_t rows, std::size_t cols, double sigma);

/// Low-pass reconstruction times high-pass reconstruction of one map:
/// idft(dft(x) * low) * idft(dft(x) * (1 - high)), elementwise.
RealGrid bandpass_term(const RealGrid& x, const FrequencyMask& low, const FrequencyMask& high);
RealGrid bandpass_term(const DftPlan& plan, const RealGrid& x, const FrequencyMask& low,
                       const FrequencyMask& high);

}  // namespace dve
