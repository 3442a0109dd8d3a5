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
#include "dve/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "dve/error.hpp"

namespace dve {

std::size_t shape_volume(const Tensor::Shape& shape) noexcept {
  std::size_t volume = 1;
  for (auto extent : shape) volume *= extent;
  return volume;
}

std::size_t find_non_finite(std::span<const float> values) noexcept {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) return i;
  }
  return values.size();
}

Tensor::Tensor(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty() || shape_.size() > 4) {
    fail(ErrorCode::kInvalidArgument,
         "tensor rank must be 1..4, got " + std::to_string(shape_.size()));
  }
  for (auto extent : shape_) {
    if (extent == 0) fail(ErrorCode::kInvalidArgument, "tensor extents must be positive");
  }
  if (data_.size() != shape_volume(shape_)) {
    fail(ErrorCode::kInvalidArgument,
         "tensor payload has " + std::to_string(data_.size()) + " values, shape needs " +
             std::to_string(shape_volume(shape_)));
  }
  if (auto bad = find_non_finite(data_); bad != data_.size()) {
    fail(ErrorCode::kCorruptValues, "non-finite tensor value at index " + std::to_string(bad));
  }
}

Tensor Tensor::zeros(Shape shape) {
  auto volume = shape_volume(shape);
  return Tensor(std::move(shape), std::vector<float>(volume, 0.0f));
}

bool Tensor::operator==(const Tensor& other) const {
  // Bitwise, so that -0.0f and 0.0f are distinguished.
  return shape_ == other.shape_ &&
         std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0;
}

RealGrid::RealGrid(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

RealGrid::RealGrid(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    fail(ErrorCode::kInvalidArgument, "grid payload does not match its shape");
  }
}

RealGrid RealGrid::from_tensor(const Tensor& t) {
  if (t.rank() != 2) fail(ErrorCode::kShapeMismatch, "expected a rank-2 tensor");
  return from_floats(t.extent(0), t.extent(1), t.values());
}

RealGrid RealGrid::from_floats(std::size_t rows, std::size_t cols,
                               std::span<const float> values) {
  if (values.size() != rows * cols) {
    fail(ErrorCode::kShapeMismatch, "slice length does not match grid shape");
  }
  return RealGrid(rows, cols, std::vector<double>(values.begin(), values.end()));
}

double RealGrid::min() const {
  if (values_.empty()) fail(ErrorCode::kInvalidArgument, "min of empty grid");
  return *std::min_element(values_.begin(), values_.end());
}

double RealGrid::max() const {
  if (values_.empty()) fail(ErrorCode::kInvalidArgument, "max of empty grid");
  return *std::max_element(values_.begin(), values_.end());
}

double RealGrid::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RealGrid& RealGrid::operator+=(const RealGrid& other) {
  if (!same_shape(other)) fail(ErrorCode::kShapeMismatch, "grid shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RealGrid& RealGrid::operator*=(double factor) noexcept {
  for (double& v : values_) v *= factor;
  return *this;
}

Tensor RealGrid::to_tensor() const {
  std::vector<float> narrowed(values_.begin(), values_.end());
  return Tensor({rows_, cols_}, std::move(narrowed));
}

}  // namespace dve
