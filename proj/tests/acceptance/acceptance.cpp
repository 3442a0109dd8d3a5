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
// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "dve/bundle.hpp"
#include "dve/error.hpp"
#include "dve/fs_util.hpp"
#include "dve/saliency.hpp"
#include "dve/spectral.hpp"
#include "dve/synthetic.hpp"
#include "dve/tensor_io.hpp"
#include "support/test_support.hpp"

using namespace dve;
namespace dt = dve::testing;
using Clock = std::chrono::steady_clock;

namespace {

// Collects the first few violations of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  void le(double value, double bound, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << value << " > " << bound;
    expect(value <= bound, s.str());
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool passed() const { return count_ == 0; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t count() const { return count_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t count_ = 0;
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Tensor stack_tensor(const std::vector<RealGrid>& maps) {
  const std::size_t m = maps.front().rows(), n = maps.front().cols();
  std::vector<float> values;
  for (const auto& g : maps)
    for (double v : g.values()) values.push_back(static_cast<float>(v));
  return Tensor({maps.size(), m, n}, std::move(values));
}

// f32-exact random grid, so stacks hold the same values as the oracle input.
RealGrid random_f32_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  auto g = dt::random_grid(rng, rows, cols);
  for (double& v : g.values()) v = static_cast<float>(v);
  return g;
}

void dft_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> side(2, 16);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = t == 0 ? 7 : side(rng), n = t == 0 ? 7 : side(rng);
    const auto x = dt::random_grid(rng, m, n);
    const auto fast = dft2d(x);
    c.le(dt::relative_error(fast, dt::naive_dft(x)), 1e-6, "dft vs naive sum");
    const auto back = idft2d(fast);
    c.le(dt::max_abs_diff(back, x), 1e-6, "round trip");
    const auto naive_back = dt::naive_idft(fast);
    RealGrid naive_real(m, n);
    for (std::size_t i = 0; i < m * n; ++i) naive_real.values()[i] = naive_back.values()[i].real();
    c.le(dt::relative_error(back, naive_real), 1e-6, "idft vs naive sum");
  }
  const double elapsed = seconds_since(start);
  std::ostringstream s;
  s << "runtime " << std::fixed << std::setprecision(3) << elapsed << " s";
  c.note(s.str());
  c.le(elapsed, 10.0, "runtime seconds");
}

void parseval_linearity(Check& c) {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> side(2, 16);
  std::uniform_real_distribution<double> scalar(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = side(rng), n = side(rng);
    const auto x = dt::random_grid(rng, m, n);
    const auto y = dt::random_grid(rng, m, n);
    const auto fx = dft2d(x);

    double energy = 0.0, spectral_energy = 0.0;
    for (double v : x.values()) energy += v * v;
    for (const auto& z : fx.values()) spectral_energy += std::norm(z);
    spectral_energy /= static_cast<double>(m * n);
    c.le(std::abs(energy - spectral_energy) / energy, 1e-6, "parseval");

    const double a = scalar(rng), b = scalar(rng);
    RealGrid combo(m, n);
    for (std::size_t i = 0; i < m * n; ++i)
      combo.values()[i] = a * x.values()[i] + b * y.values()[i];
    const auto fy = dft2d(y);
    ComplexGrid expected(m, n);
    for (std::size_t i = 0; i < m * n; ++i)
      expected.values()[i] = a * fx.values()[i] + b * fy.values()[i];
    c.le(dt::relative_error(dft2d(combo), expected), 1e-6, "linearity");
  }
}

void kernel_suite(Check& c) {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<std::size_t> side(3, 14);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = side(rng);
    const auto s = dt::random_grid(rng, n, n, -2.0, 2.0);
    const auto k = noise_kernel(s);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        c.le(std::abs(k.distance(i, j) - k.distance(j, i)), 1e-9, "D asymmetry");
        c.expect(k.distance(i, j) >= -1e-9, "D negative");
        c.expect(k.kernel(i, j) > 0.0 && k.kernel(i, j) <= 1.0, "K outside (0,1]");
      }
    }
    RealGrid literal(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) literal(i, j) = s(i, j) / k.kernel(i, j);
    const auto filtered = apply_noise_filter(s);
    c.le(dt::relative_error(filtered, literal), 1e-9, "filter vs S/K");
    c.le(dt::relative_error(filtered, dt::oracle_noise_filter(s)), 1e-9, "filter vs loop oracle");
  }
  RealGrid identity(2, 2);
  identity(0, 0) = identity(1, 1) = 1.0;
  const auto out = apply_noise_filter(identity);
  const RealGrid expected(2, 2, std::vector<double>{2.0, 0.0, 0.0, 2.0});
  c.le(dt::max_abs_diff(out, expected), 1e-12, "identity case");
}

void structure_suite(Check& c) {
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::size_t> side(3, 14);
  std::uniform_int_distribution<std::size_t> count(2, 9);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = side(rng), k = count(rng);
    const auto low = gaussian_mask(n, n, kDefaultSigmaLow);
    const auto high = gaussian_mask(n, n, kDefaultSigmaHigh);
    std::vector<RealGrid> maps;
    for (std::size_t i = 0; i < k; ++i) maps.push_back(random_f32_grid(rng, n, n));
    const FeatureMapStack stack("pool5", stack_tensor(maps));
    const auto whole = explain_stack(stack, low, high).values;
    const double scale = std::max(whole.max_abs(), 1.0);

    const auto zero = explain_stack(FeatureMapStack("z", Tensor::zeros({k, n, n})), low, high);
    c.le(zero.values.max_abs(), 1e-9, "zero stack");

    auto permuted = maps;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    c.le(dt::max_abs_diff(explain_stack(FeatureMapStack("p", stack_tensor(permuted)), low, high).values,
                          whole) / scale,
         1e-9, "permutation");

    const std::size_t cut = 1 + t % (k - 1);
    auto sum = explain_stack(FeatureMapStack("a", stack_tensor({maps.begin(), maps.begin() + cut})),
                             low, high).values;
    sum += explain_stack(FeatureMapStack("b", stack_tensor({maps.begin() + cut, maps.end()})), low,
                         high).values;
    c.le(dt::max_abs_diff(sum, whole) / scale, 1e-9, "partition additivity");

    auto with_constant = maps;
    with_constant.push_back(RealGrid(n, n, 0.75));
    c.le(dt::max_abs_diff(
             explain_stack(FeatureMapStack("c", stack_tensor(with_constant)), low, high).values,
             whole) / scale,
         1e-9, "constant map contributes");

    const auto single = explain_stack(FeatureMapStack("s", stack_tensor({maps[0]})), low, high);
    const auto composed =
        dt::oracle_noise_filter(dt::oracle_bandpass(maps[0], kDefaultSigmaLow, kDefaultSigmaHigh));
    c.le(dt::relative_error(single.values, composed, 1e-12), 1e-9, "single map vs composed oracle");
  }
}

void homogeneity(Check& c) {
  std::mt19937_64 rng(1005);
  const auto low = gaussian_mask(7, 7, kDefaultSigmaLow);
  const auto high = gaussian_mask(7, 7, kDefaultSigmaHigh);
  for (int t = 0; t < 100; ++t) {
    auto x = dt::random_grid(rng, 7, 7);
    const auto base = bandpass_term(x, low, high);
    x *= 2.0;
    auto scaled = base;
    scaled *= 4.0;
    c.le(dt::relative_error(bandpass_term(x, low, high), scaled, 1e-12), 1e-6, "homogeneity");
  }
}

void format_conformance(Check& c) {
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<std::size_t> rank(1, 4);
  std::uniform_int_distribution<std::size_t> extent(1, 9);
  std::uniform_int_distribution<std::uint32_t> bits;
  for (int t = 0; t < 1000; ++t) {
    Tensor::Shape shape(rank(rng));
    for (auto& e : shape) e = extent(rng);
    std::vector<float> values(shape_volume(shape));
    for (auto& v : values) {
      do {
        const std::uint32_t b = bits(rng);
        std::memcpy(&v, &b, sizeof v);
      } while (!std::isfinite(v));
    }
    const Tensor original(shape, values);
    const auto bytes = encode_tensor(original);
    const auto decoded = read_tensor(bytes);
    c.expect(decoded == original && encode_tensor(decoded) == bytes, "round trip not bit-exact");
  }

  const auto good = encode_tensor(Tensor({2, 3}, std::vector<float>(6, 1.5f)));
  auto bad_magic = good;
  bad_magic[0] = std::byte{'X'};
  c.expect(code_of([&] { read_tensor(bad_magic); }) == ErrorCode::kNotDvt, "bad magic");
  const std::vector<std::byte> truncated(good.begin(), good.end() - 1);
  c.expect(code_of([&] { read_tensor(truncated); }) == ErrorCode::kTruncated, "truncation");
  auto bad_version = good;
  bad_version[4] = std::byte{2};
  c.expect(code_of([&] { read_tensor(bad_version); }) == ErrorCode::kUnsupportedVersion,
           "unsupported version");

  dt::TempDir dir;
  const auto bundle = make_synthetic_bundle(SyntheticOptions{});
  write_bundle(bundle, dir / "b");
  auto manifest = nlohmann::json::parse(read_file_text(dir / "b" / "manifest.json"));
  manifest["predicted_class"] = (bundle.prediction().class_index + 1) % 10;
  write_file_atomic(dir / "b" / "manifest.json", manifest.dump(2));
  c.expect(code_of([&] { load_bundle(dir / "b"); }) == ErrorCode::kInconsistentBundle,
           "inconsistent bundle");
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

std::map<std::string, std::string> read_golden() {
  std::map<std::string, std::string> golden;
  std::istringstream in(read_file_text(DVE_GOLDEN_FILE));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string name, digest;
    if (fields >> name >> digest) golden[name] = digest;
  }
  return golden;
}

void golden_end_to_end(Check& c) {
  dt::TempDir dir;
  const auto bundle_dir = dir / "seed42";
  write_bundle(make_synthetic_bundle(SyntheticOptions{}), bundle_dir);

  // The CLI output must agree with the independent oracle before its digest counts.
  const auto bundle = load_bundle(bundle_dir);
  const auto& stack = bundle.layer("").stack;
  RealGrid oracle(stack.rows(), stack.cols());
  for (std::size_t k = 0; k < stack.count(); ++k)
    oracle += dt::oracle_noise_filter(
        dt::oracle_bandpass(stack.map(k), kDefaultSigmaLow, kDefaultSigmaHigh));
  const auto oracle_targeted = dt::oracle_bandpass(oracle, kDefaultSigmaLow, kDefaultSigmaHigh);

  std::map<std::string, std::string> digests;
  for (const char* threads : {"1", "2", "4", "0", "1"}) {
    ::setenv("DVE_THREADS", threads, 1);
    for (const std::string cmd : {"explain", "targeted"}) {
      const auto out = dir / (cmd + threads + ".dvt");
      if (cli({cmd, "--bundle", bundle_dir.string(), "--raw-out", out.string()}) != 0) {
        c.expect(false, cmd + " exited nonzero");
        continue;
      }
      const auto digest = dt::sha256_file(out);
      auto [it, inserted] = digests.emplace(cmd, digest);
      c.expect(inserted || it->second == digest, cmd + " digest differs with DVE_THREADS=" + threads);
      const auto values = RealGrid::from_tensor(read_tensor_file(out));
      const auto& ref = cmd == "explain" ? oracle : oracle_targeted;
      c.le(dt::relative_error(values, ref), 1e-6, cmd + " vs oracle (f32 output)");
    }
  }
  ::unsetenv("DVE_THREADS");

  const auto golden = read_golden();
  for (const auto& [cmd, digest] : digests) {
    c.note(cmd + " sha256 " + digest);
    const auto it = golden.find(cmd);
    c.expect(it != golden.end() && it->second == digest, cmd + " digest does not match golden");
  }
}

void performance(Check& c) {
  const auto bundle = make_synthetic_bundle(42, 512, 7, 7, 10);
  const auto& stack = bundle.layer("").stack;
  ExplainOptions options;
  options.threads = 1;
  std::vector<double> ms;
  for (int run = 0; run < 7; ++run) {
    const auto start = Clock::now();
    const auto low = gaussian_mask(7, 7, kDefaultSigmaLow);
    const auto high = gaussian_mask(7, 7, kDefaultSigmaHigh);
    const auto s = explain_stack(stack, low, high, options);
    ms.push_back(seconds_since(start) * 1e3);
    c.expect(s.values.rows() == 7, "result shape");
  }
  const double first = ms.front();
  std::sort(ms.begin(), ms.end());
  const double median = ms[ms.size() / 2];
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << "first " << first << " ms, median of 7 " << median
    << " ms";
  c.note(s.str());
  c.le(median, 50.0, "median ms");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Check&)>> criteria = {
      {"dft-oracle-equivalence", dft_oracle},
      {"parseval-and-linearity", parseval_linearity},
      {"noise-kernel-suite", kernel_suite},
      {"aggregation-structure-suite", structure_suite},
      {"bandpass-homogeneity", homogeneity},
      {"dvt-format-conformance", format_conformance},
      {"golden-end-to-end", golden_end_to_end},
      {"performance-512x7x7", performance},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.passed() ? "PASS " : "FAIL ") << name;
    for (const auto& n : c.notes()) std::cout << " [" << n << "]";
    std::cout << '\n';
    for (const auto& f : c.failures()) std::cout << "    " << f << '\n';
    if (c.count() > c.failures().size())
      std::cout << "    ... " << c.count() - c.failures().size() << " more\n";
    failed += c.passed() ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}
