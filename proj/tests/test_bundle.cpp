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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <map>

#include <json.hpp>

#include "dve/bundle.hpp"
#include "dve/error.hpp"
#include "dve/fs_util.hpp"
#include "dve/synthetic.hpp"
#include "dve/tensor_io.hpp"
#include "support/test_support.hpp"

using namespace dve;
using dve::testing::TempDir;
namespace fs = std::filesystem;

namespace {

std::pair<ErrorCode, std::string> error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  FAIL("expected dve::Error");
  return {ErrorCode::kInternal, ""};
}

std::map<std::string, std::string> digests_of(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    out[entry.path().filename().string()] = dve::testing::sha256_file(entry.path());
  }
  return out;
}

nlohmann::json read_manifest(const fs::path& dir) {
  return nlohmann::json::parse(read_file_text(dir / "manifest.json"));
}

void write_manifest(const fs::path& dir, const nlohmann::json& doc) {
  write_file_atomic(dir / "manifest.json", doc.dump(2));
}

}  // namespace

TEST_CASE("SplitMix64 matches the published reference sequence") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafull);
  std::uint64_t state = 12345;
  SplitMix64 ours(12345);
  for (int i = 0; i < 100; ++i) REQUIRE(ours.next() == dve::testing::splitmix64_draw(state));
}

TEST_CASE("seed 7: first feature-map value is float of the first uniform draw") {
  // First SplitMix64(7) output 0x63cbe1e459320dd7 -> (x >> 11) * 2^-53.
  std::uint64_t state = 7;
  const auto first = dve::testing::splitmix64_draw(state);
  CHECK(first == 0x63cbe1e459320dd7ull);
  const double u = static_cast<double>(first >> 11) * 0x1.0p-53;
  CHECK(u == doctest::Approx(0.3898297483912715).epsilon(1e-15));

  const auto bundle = make_synthetic_bundle(7, 4, 5, 5, 3);
  CHECK(bundle.layers().front().stack.maps().values()[0] == static_cast<float>(u));
  CHECK(bundle.layers().front().stack.maps().values()[0] == 0.38982975482940674f);
}

TEST_CASE("synthetic bundle shape contract") {
  const auto b = make_synthetic_bundle(1, 1, 4, 4, 2);
  REQUIRE(b.layers().size() == 1);
  CHECK(b.layers()[0].stack.maps().shape() == Tensor::Shape{1, 4, 4});
  CHECK(b.layers()[0].stack.layer_name() == "pool5");
  CHECK(b.logits().shape() == Tensor::Shape{2});
  CHECK(b.labels().size() == 2);
  CHECK(b.prediction().class_index == argmax(b.logits().values()));
  CHECK(b.image().shape() == Tensor::Shape{32, 32, 3});
  REQUIRE(b.layers()[0].gradcam_weights.has_value());
  CHECK(b.layers()[0].gradcam_weights->size() == 1);
}

TEST_CASE("synthetic parameters are validated") {
  CHECK(error_of([] { make_synthetic_bundle(1, 0, 4, 4, 2); }).first == ErrorCode::kInvalidArgument);
  CHECK(error_of([] { make_synthetic_bundle(1, 1, 4, 4, 0); }).first == ErrorCode::kInvalidArgument);
  CHECK(error_of([] { make_synthetic_bundle(1, 1, 1, 1, 2); }).first == ErrorCode::kInvalidArgument);
  CHECK(error_of([] { make_synthetic_bundle(1, 1, 4, 5, 2); }).first == ErrorCode::kInvalidArgument);
}

TEST_CASE("multi-layer synthetic bundles are ordered shallow to deep") {
  SyntheticOptions o;
  o.layer_count = 3;
  o.size = 4;
  const auto b = make_synthetic_bundle(o);
  REQUIRE(b.layers().size() == 3);
  CHECK(b.layers()[0].stack.layer_name() == "pool3");
  CHECK(b.layers()[0].stack.rows() == 16);
  CHECK(b.layers()[2].stack.layer_name() == "pool5");
  CHECK(b.layers()[2].stack.rows() == 4);
  CHECK(&b.layer("") == &b.layers().back());
}

TEST_CASE("seed 42 twice gives byte-identical bundles") {
  TempDir dir;
  write_bundle(make_synthetic_bundle(42, 8, 7, 7, 10), dir / "a");
  write_bundle(make_synthetic_bundle(42, 8, 7, 7, 10), dir / "b");
  const auto a = digests_of(dir / "a");
  CHECK(a.size() == 6);
  CHECK(a == digests_of(dir / "b"));
}

TEST_CASE("load_bundle returns what write_bundle stored") {
  TempDir dir;
  SyntheticOptions o;
  o.layer_count = 2;
  o.blur_sigma = 2.5;
  const auto original = make_synthetic_bundle(o);
  write_bundle(original, dir.path());
  const auto loaded = load_bundle(dir.path());
  CHECK(loaded.manifest().model_id == original.manifest().model_id);
  CHECK(loaded.manifest().blur_sigma == 2.5);
  CHECK(loaded.image() == original.image());
  CHECK(loaded.logits() == original.logits());
  CHECK(loaded.labels() == original.labels());
  CHECK(loaded.prediction().class_index == argmax(loaded.logits().values()));
  REQUIRE(loaded.layers().size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(loaded.layers()[i].stack.maps() == original.layers()[i].stack.maps());
    CHECK(*loaded.layers()[i].gradcam_weights == *original.layers()[i].gradcam_weights);
  }
}

TEST_CASE("load_bundle error paths") {
  TempDir dir;
  const auto path = dir / "bundle";
  write_bundle(make_synthetic_bundle(42, 8, 7, 7, 10), path);

  SUBCASE("missing directory") {
    auto [code, msg] = error_of([&] { load_bundle(dir / "nowhere"); });
    CHECK(code == ErrorCode::kMissingFile);
    CHECK(msg.find("nowhere") != std::string::npos);
  }
  SUBCASE("logits file deleted") {
    fs::remove(path / "logits.dvt");
    auto [code, msg] = error_of([&] { load_bundle(path); });
    CHECK(code == ErrorCode::kMissingFile);
    CHECK(msg.find("logits.dvt") != std::string::npos);
  }
  SUBCASE("manifest class disagrees with argmax(logits)") {
    auto doc = read_manifest(path);
    const auto actual = doc["predicted_class"].get<int>();
    doc["predicted_class"] = (actual + 1) % 10;
    write_manifest(path, doc);
    auto [code, msg] = error_of([&] { load_bundle(path); });
    CHECK(code == ErrorCode::kInconsistentBundle);
    CHECK(msg.find("inconsistent bundle") != std::string::npos);
  }
  SUBCASE("layer shape disagrees with the manifest") {
    auto doc = read_manifest(path);
    doc["layers"][0]["k"] = 9;
    write_manifest(path, doc);
    auto [code, msg] = error_of([&] { load_bundle(path); });
    CHECK(code == ErrorCode::kShapeMismatch);
    CHECK(msg.find("shape mismatch") != std::string::npos);
  }
  SUBCASE("image size disagrees with preprocessing.resize") {
    auto doc = read_manifest(path);
    doc["preprocessing"]["resize"] = {224, 224};
    write_manifest(path, doc);
    CHECK(error_of([&] { load_bundle(path); }).first == ErrorCode::kShapeMismatch);
  }
  SUBCASE("label count disagrees with logits") {
    std::ofstream(path / "labels.txt") << "only\none\n";
    CHECK(error_of([&] { load_bundle(path); }).first == ErrorCode::kShapeMismatch);
  }
  SUBCASE("gradcam weights of the wrong length") {
    write_tensor_file(Tensor({3}, {1, 2, 3}), path / "pool5.gradw.dvt");
    CHECK(error_of([&] { load_bundle(path); }).first == ErrorCode::kShapeMismatch);
  }
  SUBCASE("declared gradcam weights missing") {
    fs::remove(path / "pool5.gradw.dvt");
    auto [code, msg] = error_of([&] { load_bundle(path); });
    CHECK(code == ErrorCode::kMissingFile);
    CHECK(msg.find("pool5.gradw.dvt") != std::string::npos);
  }
  SUBCASE("corrupt logits payload") {
    auto bytes = read_file_bytes(path / "logits.dvt");
    bytes.resize(bytes.size() - 2);
    write_file_atomic(path / "logits.dvt", bytes);
    auto [code, msg] = error_of([&] { load_bundle(path); });
    CHECK(code == ErrorCode::kTruncated);
    CHECK(msg.find("logits.dvt") != std::string::npos);
  }
  SUBCASE("manifest is not JSON") {
    write_file_atomic(path / "manifest.json", std::string("{not json"));
    CHECK(error_of([&] { load_bundle(path); }).first == ErrorCode::kBadManifest);
  }
  SUBCASE("manifest lacks a key") {
    auto doc = read_manifest(path);
    doc.erase("model_id");
    write_manifest(path, doc);
    auto [code, msg] = error_of([&] { load_bundle(path); });
    CHECK(code == ErrorCode::kBadManifest);
    CHECK(msg.find("model_id") != std::string::npos);
  }
  SUBCASE("layer names cannot escape the bundle directory") {
    auto doc = read_manifest(path);
    doc["layers"][0]["name"] = "../pool5";
    write_manifest(path, doc);
    CHECK(error_of([&] { load_bundle(path); }).first == ErrorCode::kBadManifest);
  }
  SUBCASE("image values outside [0, 1]") {
    auto image = read_tensor_file(path / "image.dvt");
    std::vector<float> values(image.values().begin(), image.values().end());
    values[0] = 1.5f;
    write_tensor_file(Tensor(image.shape(), values), path / "image.dvt");
    CHECK(error_of([&] { load_bundle(path); }).first == ErrorCode::kCorruptValues);
  }
}

TEST_CASE("exporter-style manifest extras are preserved") {
  TempDir dir;
  write_bundle(make_synthetic_bundle(3, 2, 4, 4, 3), dir.path());
  auto doc = read_manifest(dir.path());
  doc["preprocessing"]["channel_order"] = "BGR";
  doc["preprocessing"]["mean"] = {103.939, 116.779, 123.68};
  write_manifest(dir.path(), doc);
  const auto loaded = load_bundle(dir.path());
  CHECK(loaded.manifest().preprocessing.mean[2] == doctest::Approx(123.68));
  write_bundle(loaded, dir / "copy");
  CHECK(read_manifest(dir / "copy")["preprocessing"]["channel_order"] == "BGR");
}

TEST_CASE("softmax is stable and normalized") {
  const std::vector<float> logits{1000.0f, 1000.0f, -1000.0f};
  const auto p = softmax(logits);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == 0.0);
  CHECK(argmax(logits) == 0);
}

TEST_CASE("unknown layer lookup fails") {
  const auto b = make_synthetic_bundle(1, 1, 4, 4, 2);
  CHECK(error_of([&] { b.layer("conv9"); }).first == ErrorCode::kUnknownLayer);
}
