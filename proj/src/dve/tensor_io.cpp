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
#include "dve/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "dve/error.hpp"
#include "dve/fs_util.hpp"

namespace dve {

namespace {

constexpr std::size_t kHeaderFixed = 6;  // magic + version + ndim

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(std::span<const std::byte> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::to_integer<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::size_t dvt_encoded_size(const Tensor::Shape& shape) noexcept {
  return kHeaderFixed + 4 * shape.size() + 4 * shape_volume(shape);
}

std::vector<std::byte> encode_tensor(const Tensor::Shape& shape, std::span<const float> values) {
  if (shape.empty() || shape.size() > 4) {
    fail(ErrorCode::kInvalidArgument, "DVT rank must be 1..4");
  }
  for (auto extent : shape) {
    if (extent == 0 || extent > UINT32_MAX) {
      fail(ErrorCode::kInvalidArgument, "DVT extents must fit in 1..2^32-1");
    }
  }
  if (values.size() != shape_volume(shape)) {
    fail(ErrorCode::kInvalidArgument, "payload length does not match shape");
  }
  if (auto bad = find_non_finite(values); bad != values.size()) {
    fail(ErrorCode::kCorruptValues,
         "refusing to write non-finite value at index " + std::to_string(bad));
  }

  std::vector<std::byte> out;
  out.reserve(dvt_encoded_size(shape));
  for (char c : kDvtMagic) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(kDvtVersion));
  out.push_back(static_cast<std::byte>(shape.size()));
  for (auto extent : shape) put_u32(out, static_cast<std::uint32_t>(extent));
  for (float v : values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

std::vector<std::byte> encode_tensor(const Tensor& t) {
  return encode_tensor(t.shape(), t.values());
}

std::size_t write_tensor(const Tensor& t, std::ostream& out) {
  auto bytes = encode_tensor(t);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "DVT write failed");
  return bytes.size();
}

Tensor read_tensor(std::span<const std::byte> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kDvtMagic, 4) != 0) {
    fail(ErrorCode::kNotDvt, "not a DVT file");
  }
  if (bytes.size() < kHeaderFixed) fail(ErrorCode::kTruncated, "truncated: header incomplete");
  auto version = std::to_integer<unsigned>(bytes[4]);
  if (version != kDvtVersion) {
    fail(ErrorCode::kUnsupportedVersion, "unsupported version " + std::to_string(version));
  }
  auto ndim = std::to_integer<std::size_t>(bytes[5]);
  if (ndim < 1 || ndim > 4) {
    fail(ErrorCode::kNotDvt, "not a DVT file: rank " + std::to_string(ndim) + " outside 1..4");
  }
  if (bytes.size() < kHeaderFixed + 4 * ndim) {
    fail(ErrorCode::kTruncated, "truncated: extents incomplete");
  }
  Tensor::Shape shape(ndim);
  for (std::size_t d = 0; d < ndim; ++d) {
    shape[d] = get_u32(bytes, kHeaderFixed + 4 * d);
    if (shape[d] == 0) fail(ErrorCode::kNotDvt, "not a DVT file: zero extent");
  }
  const std::size_t payload_at = kHeaderFixed + 4 * ndim;
  const std::size_t available = (bytes.size() - payload_at) / 4;
  std::size_t volume = 1;
  for (auto extent : shape) {
    if (volume > SIZE_MAX / extent) fail(ErrorCode::kTruncated, "truncated: absurd extents");
    volume *= extent;
  }
  if (volume > available) {
    fail(ErrorCode::kTruncated, "truncated: expected " + std::to_string(volume) +
                                    " values, found " + std::to_string(available));
  }
  if (bytes.size() - payload_at != 4 * volume) {
    fail(ErrorCode::kNotDvt, "not a DVT file: trailing bytes after payload");
  }
  std::vector<float> data(volume);
  for (std::size_t i = 0; i < volume; ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, payload_at + 4 * i));
  }
  if (auto bad = find_non_finite(data); bad != data.size()) {
    fail(ErrorCode::kCorruptValues, "corrupt values: non-finite at index " + std::to_string(bad));
  }
  return Tensor(std::move(shape), std::move(data));
}

Tensor read_tensor(std::istream& in) {
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, "DVT read failed");
  return read_tensor(std::as_bytes(std::span<const char>(raw)));
}

Tensor read_tensor_file(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  try {
    return read_tensor(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.filename().string() + ": " + e.what());
  }
}

void write_tensor_file(const Tensor& t, const std::filesystem::path& path) {
  write_file_atomic(path, encode_tensor(t));
}

}  // namespace dve
