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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "dve/tensor.hpp"

namespace dve {

// DVT layout, all little-endian:
//   "DVET" | version u8 (=1) | ndim u8 (1..4) | ndim x extent u32 | f32 payload
// Payload is row-major with no padding or trailer.
inline constexpr char kDvtMagic[4] = {'D', 'V', 'E', 'T'};
inline constexpr std::uint8_t kDvtVersion = 1;

std::size_t dvt_encoded_size(const Tensor::Shape& shape) noexcept;

/// Encodes raw values; refuses non-finite input naming the first bad index.
std::vector<std::byte> encode_tensor(const Tensor::Shape& shape, std::span<const float> values);
std::vector<std::byte> encode_tensor(const Tensor& t);

/// Writes the DVT encoding of \p t and returns the number of bytes emitted.
std::size_t write_tensor(const Tensor& t, std::ostream& out);

Tensor read_tensor(std::span<const std::byte> bytes);
Tensor read_tensor(std::istream& in);

Tensor read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const Tensor& t, const std::filesystem::path& path);

}  // namespace dve
