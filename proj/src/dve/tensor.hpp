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
#include <span>
#include <vector>

namespace dve {

/// Dense row-major array of 32-bit reals with 1 to 4 positive extents.
///
/// The constructor enforces every invariant (rank, extents, payload length,
/// finiteness), so a Tensor that exists is always valid.
class Tensor {
 public:
  using Shape = std::vector<std::size_t>;

  Tensor(Shape shape, std::vector<float> data);

  /// Zero-filled tensor of the given shape.
  static Tensor zeros(Shape shape);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const float> values() const noexcept { return data_; }

  bool operator==(const Tensor& other) const;

 private:
  Shape shape_;
  std::vector<float> data_;
};

std::size_t shape_volume(const Tensor::Shape& shape) noexcept;

/// Index of the first non-finite value, or values.size() if all are finite.
std::size_t find_non_finite(std::span<const float> values) noexcept;

/// M x N grid of doubles; the working precision of all numeric kernels.
class RealGrid {
 public:
  RealGrid() = default;
  RealGrid(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealGrid(std::size_t rows, std::size_t cols, std::vector<double> values);

  /// Widens a rank-2 tensor.
  static RealGrid from_tensor(const Tensor& t);
  /// Widens one M x N slice of a float buffer.
  static RealGrid from_floats(std::size_t rows, std::size_t cols,
                              std::span<const float> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool same_shape(const RealGrid& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double min() const;
  double max() const;
  double max_abs() const noexcept;

  RealGrid& operator+=(const RealGrid& other);
  RealGrid& operator*=(double factor) noexcept;

  /// Narrows to a rank-2 float tensor; throws if any value is not finite.
  Tensor to_tensor() const;

  bool operator==(const RealGrid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace dve
