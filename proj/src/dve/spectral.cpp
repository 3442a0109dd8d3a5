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
#include "dve/spectral.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include "dve/error.hpp"

namespace dve {

namespace {

std::vector<Complex> twiddle_table(std::size_t n) {
  std::vector<Complex> table(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    table[t] = Complex(std::cos(angle), std::sin(angle));
  }
  return table;
}

void require_finite(const RealGrid& x) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) fail(ErrorCode::kCorruptValues, "non-finite input to dft2d");
  }
}

void require_finite(const ComplexGrid& x) {
  for (const auto& v : x.values()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(ErrorCode::kCorruptValues, "non-finite spectrum entry");
    }
  }
}

}  // namespace

DftPlan::DftPlan(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_twiddles_(twiddle_table(rows)), col_twiddles_(twiddle_table(cols)) {
  if (rows == 0 || cols == 0) fail(ErrorCode::kInvalidArgument, "DFT extents must be positive");
}

void DftPlan::transform(ComplexGrid& grid, bool inverse) const {
  auto twiddle = [inverse](const std::vector<Complex>& table, std::size_t t) {
    return inverse ? std::conj(table[t]) : table[t];
  };

  std::vector<Complex> line(std::max(rows_, cols_));
  // Along each row (index j, frequency v).
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t v = 0; v < cols_; ++v) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        acc += grid(r, j) * twiddle(col_twiddles_, (v * j) % cols_);
      }
      line[v] = acc;
    }
    for (std::size_t v = 0; v < cols_; ++v) grid(r, v) = line[v];
  }
  // Along each column (index k, frequency u).
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t u = 0; u < rows_; ++u) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < rows_; ++k) {
        acc += grid(k, c) * twiddle(row_twiddles_, (u * k) % rows_);
      }
      line[u] = acc;
    }
    for (std::size_t u = 0; u < rows_; ++u) grid(u, c) = line[u];
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(rows_ * cols_);
    for (auto& v : grid.values()) v *= scale;
  }
}

ComplexGrid DftPlan::forward(const RealGrid& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) fail(ErrorCode::kShapeMismatch, "DFT plan size mismatch");
  require_finite(x);
  ComplexGrid grid(rows_, cols_);
  std::copy(x.values().begin(), x.values().end(), grid.values().begin());
  transform(grid, false);
  return grid;
}

ComplexGrid DftPlan::forward(const ComplexGrid& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) fail(ErrorCode::kShapeMismatch, "DFT plan size mismatch");
  require_finite(x);
  ComplexGrid grid = x;
  transform(grid, false);
  return grid;
}

ComplexGrid DftPlan::inverse(const ComplexGrid& spectrum) const {
  if (spectrum.rows() != rows_ || spectrum.cols() != cols_) {
    fail(ErrorCode::kShapeMismatch, "DFT plan size mismatch");
  }
  require_finite(spectrum);
  ComplexGrid grid = spectrum;
  transform(grid, true);
  return grid;
}

RealGrid DftPlan::inverse_real(const ComplexGrid& spectrum, InverseCheck check) const {
  auto grid = inverse(spectrum);
  RealGrid out(rows_, cols_);
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t i = 0; i < grid.values().size(); ++i) {
    out.values()[i] = grid.values()[i].real();
    max_re = std::max(max_re, std::abs(grid.values()[i].real()));
    max_im = std::max(max_im, std::abs(grid.values()[i].imag()));
  }
  if (check == InverseCheck::kRealOrigin && max_im > 1e-6 * (1.0 + max_re)) {
    fail(ErrorCode::kNonRealInverse,
         "non-real inverse: imaginary residual " + std::to_string(max_im));
  }
  return out;
}

ComplexGrid dft2d(const RealGrid& x) { return DftPlan(x.rows(), x.cols()).forward(x); }

RealGrid idft2d(const ComplexGrid& spectrum, InverseCheck check) {
  return DftPlan(spectrum.rows(), spectrum.cols()).inverse_real(spectrum, check);
}

FrequencyMask::FrequencyMask(std::size_t rows, std::size_t cols, double sigma)
    : sigma_(sigma), values_(rows, cols) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::kInvalidArgument, "mask sigma must be a positive real");
  }
  if (rows == 0 || cols == 0) fail(ErrorCode::kInvalidArgument, "mask extents must be positive");
  const double denom = 2.0 * sigma * sigma;
  for (std::size_t u = 0; u < rows; ++u) {
    const double du = static_cast<double>(std::min(u, rows - u));
    for (std::size_t v = 0; v < cols; ++v) {
      const double dv = static_cast<double>(std::min(v, cols - v));
      // Floored at the smallest normal double so every entry stays in (0, 1].
      values_(u, v) = std::max(std::exp(-(du * du + dv * dv) / denom), DBL_MIN);
    }
  }
}

FrequencyMask gaussian_mask(std::size_t rows, std::size_t cols, double sigma) {
  return FrequencyMask(rows, cols, sigma);
}

RealGrid bandpass_term(const RealGrid& x, const FrequencyMask& low, const FrequencyMask& high) {
  return bandpass_term(DftPlan(x.rows(), x.cols()), x, low, high);
}

RealGrid bandpass_term(const DftPlan& plan, const RealGrid& x, const FrequencyMask& low,
                       const FrequencyMask& high) {
  if (!low.values().same_shape(x) || !high.values().same_shape(x)) {
    fail(ErrorCode::kShapeMismatch, "mask shape does not match the feature map");
  }
  const auto spectrum = plan.forward(x);
  ComplexGrid low_pass(x.rows(), x.cols());
  ComplexGrid high_pass(x.rows(), x.cols());
  for (std::size_t i = 0; i < spectrum.values().size(); ++i) {
    low_pass.values()[i] = spectrum.values()[i] * low.values().values()[i];
    high_pass.values()[i] = spectrum.values()[i] * (1.0 - high.values().values()[i]);
  }
  auto result = plan.inverse_real(low_pass, InverseCheck::kRealOrigin);
  const auto high_part = plan.inverse_real(high_pass, InverseCheck::kRealOrigin);
  for (std::size_t i = 0; i < result.values().size(); ++i) result.values()[i] *= high_part.values()[i];
  return result;
}

}  // namespace dve
