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
#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/handles.hpp"
#include "cli/sweep_report.hpp"
#include "dve/dve.h"

namespace dve::cli {
namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Failure with a fixed exit code that is not a C API status.
class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

int exit_code_for(dve_status status) {
  switch (status) {
    case DVE_ERR_NON_SQUARE: return kExitNonSquare;
    case DVE_ERR_MISSING_GRADCAM_WEIGHTS: return kExitNoGradcamWeights;
    case DVE_ERR_NOT_DVT:
    case DVE_ERR_TRUNCATED:
    case DVE_ERR_UNSUPPORTED_VERSION:
    case DVE_ERR_CORRUPT_VALUES:
    case DVE_ERR_MISSING_FILE:
    case DVE_ERR_BAD_MANIFEST:
    case DVE_ERR_INCONSISTENT_BUNDLE:
    case DVE_ERR_SHAPE_MISMATCH:
    case DVE_ERR_UNKNOWN_LAYER:
      return kExitBadBundle;
    default:
      return kExitFailure;
  }
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("DVE_THREADS");
  if (!raw || !*raw) return 1;
  char* end = nullptr;
  const long long value = std::strtoll(raw, &end, 10);
  if (*end != '\0' || value < 0) {
    throw UsageError(std::string("DVE_THREADS must be a non-negative integer, got '") + raw + "'");
  }
  return static_cast<std::size_t>(value);
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  static std::atomic<unsigned> counter{0};
  const auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp." +
                                         std::to_string(::getpid()) + "." +
                                         std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

struct ExplainArgs {
  std::string bundle;
  std::string layer;
  double sigma_low = 1.0;
  double sigma_high = 1.5;
  std::optional<double> refine_sigma_low;
  std::optional<double> refine_sigma_high;
  double alpha = 0.5;
  bool no_noise_filter = false;
  std::string out;
  std::string raw_out;
};

dve_explain_options explain_options(const ExplainArgs& a) {
  dve_explain_options o;
  dve_explain_options_init(&o);
  o.sigma_low = a.sigma_low;
  o.sigma_high = a.sigma_high;
  o.noise_filter = a.no_noise_filter ? 0 : 1;
  o.threads = threads_from_env();
  return o;
}

MapPtr explain_layer(const dve_bundle* bundle, const std::string& layer,
                     const dve_explain_options& options) {
  dve_map* raw = nullptr;
  check(dve_explain(bundle, layer.c_str(), &options, &raw), "explain failed");
  return MapPtr(raw);
}

ImagePtr render(const dve_bundle* bundle, const dve_map* map, double alpha) {
  dve_image* raw = nullptr;
  check(dve_render_overlay(bundle, map, alpha, &raw), "render failed");
  return ImagePtr(raw);
}

void print_prediction(const dve_bundle* bundle, std::ostream& out) {
  std::size_t index = 0;
  double score = 0.0;
  dve_bundle_prediction(bundle, &index, &score);
  out << "predicted: " << dve_bundle_label(bundle, index) << " (class " << index
      << ") confidence " << std::fixed << std::setprecision(6) << score << "\n";
  out.unsetf(std::ios::fixed);
}

/// Renders first, then writes, so an error never leaves a partial output.
void emit_map(const dve_bundle* bundle, const dve_map* map, double alpha, const std::string& png,
              const std::string& raw) {
  ImagePtr image;
  if (!png.empty()) image = render(bundle, map, alpha);
  if (!raw.empty()) check(dve_map_write_dvt(map, raw.c_str()), "cannot write " + raw);
  if (image) check(dve_image_write_png(image.get(), png.c_str()), "cannot write " + png);
}

int cmd_explain(const ExplainArgs& a, bool targeted, std::ostream& out) {
  auto bundle = load_bundle(a.bundle);
  const auto options = explain_options(a);
  auto map = explain_layer(bundle.get(), a.layer, options);
  if (targeted) {
    dve_map* refined = nullptr;
    check(dve_targeted_refine(map.get(), a.refine_sigma_low.value_or(a.sigma_low),
                              a.refine_sigma_high.value_or(a.sigma_high), &refined),
          "targeted refinement failed");
    map.reset(refined);
  }
  emit_map(bundle.get(), map.get(), a.alpha, a.out, a.raw_out);
  print_prediction(bundle.get(), out);
  return kExitOk;
}

int cmd_gradcam(const ExplainArgs& a, std::ostream& out) {
  auto bundle = load_bundle(a.bundle);
  dve_map* raw = nullptr;
  check(dve_gradcam(bundle.get(), a.layer.c_str(), &raw), "gradcam failed");
  MapPtr map(raw);
  emit_map(bundle.get(), map.get(), a.alpha, a.out, a.raw_out);
  print_prediction(bundle.get(), out);
  return kExitOk;
}

struct SweepArgs {
  ExplainArgs explain;
  std::string bundles;
  std::string report;
  std::string out_dir;
};

int cmd_blur_sweep(const SweepArgs& a, std::ostream& out) {
  std::error_code ec;
  if (!fs::is_directory(a.bundles, ec)) {
    throw CommandError(kExitBadBundle, "bundles directory not found: " + a.bundles);
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(a.bundles)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.size() < 2) {
    throw CommandError(kExitBadBundle, "blur sweep needs at least two bundles in " + a.bundles);
  }

  struct Item {
    fs::path dir;
    BundlePtr bundle;
    double sigma;
  };
  std::vector<Item> items;
  for (const auto& dir : dirs) {
    auto bundle = load_bundle(dir.string());
    double sigma = 0.0;
    dve_bundle_blur_sigma(bundle.get(), &sigma);
    items.push_back({dir, std::move(bundle), sigma});
  }
  const std::string model = dve_bundle_model_id(items.front().bundle.get());
  for (const auto& item : items) {
    if (model != dve_bundle_model_id(item.bundle.get())) {
      throw CommandError(kExitInconsistentSweep,
                         "inconsistent sweep: " + item.dir.string() + " has model_id '" +
                             dve_bundle_model_id(item.bundle.get()) + "', expected '" + model + "'");
    }
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.sigma < y.sigma; });

  const fs::path report_path(a.report);
  const fs::path overlay_dir = a.out_dir.empty() ? report_path.parent_path() : fs::path(a.out_dir);
  const auto options = explain_options(a.explain);

  SweepReport report;
  std::vector<std::pair<ImagePtr, std::string>> overlays;
  for (const auto& item : items) {
    auto map = explain_layer(item.bundle.get(), a.explain.layer, options);
    auto image = render(item.bundle.get(), map.get(), a.explain.alpha);
    std::size_t index = 0;
    double score = 0.0;
    dve_bundle_prediction(item.bundle.get(), &index, &score);
    const auto overlay_path = (overlay_dir / (item.dir.filename().string() + ".overlay.png")).string();
    report.entries.push_back({item.sigma, dve_bundle_label(item.bundle.get(), index),
                              static_cast<long long>(index), score, overlay_path});
    overlays.emplace_back(std::move(image), overlay_path);
  }

  if (!overlay_dir.empty()) fs::create_directories(overlay_dir);
  for (const auto& [image, path] : overlays) {
    check(dve_image_write_png(image.get(), path.c_str()), "cannot write " + path);
  }
  write_text_atomic(report_path, emit_sweep_report(report));
  for (const auto& e : report.entries) {
    out << "sigma " << e.blur_sigma << ": " << e.predicted_label << " (class " << e.predicted_index
        << ") confidence " << e.confidence << "\n";
  }
  return kExitOk;
}

int cmd_layers(const ExplainArgs& a, const std::string& report_arg, std::ostream& out) {
  auto bundle = load_bundle(a.bundle);
  const std::size_t count = dve_bundle_layer_count(bundle.get());
  if (count < 2) {
    throw CommandError(kExitTooFewLayers,
                       "layers needs at least two layers, bundle has " + std::to_string(count));
  }
  if (a.out.empty()) throw UsageError("layers requires --out <png>");
  const auto options = explain_options(a);

  std::vector<ImagePtr> tiles;
  nlohmann::json report;
  report["layers"] = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const std::string name = dve_bundle_layer_name(bundle.get(), i);
    auto map = explain_layer(bundle.get(), name, options);
    double fraction = 0.0;
    check(dve_map_top_decile_fraction(bundle.get(), map.get(), &fraction), "top-decile failed");
    std::size_t k = 0, m = 0, n = 0;
    check(dve_bundle_layer_shape(bundle.get(), i, &k, &m, &n), "layer shape");
    report["layers"].push_back(
        {{"name", name}, {"k", k}, {"m", m}, {"n", n}, {"top_decile_fraction", fraction}});
    tiles.push_back(render(bundle.get(), map.get(), a.alpha));
    out << name << ": top-decile fraction " << fraction << "\n";
  }

  std::vector<const dve_image*> views;
  for (const auto& t : tiles) views.push_back(t.get());
  dve_image* grid_raw = nullptr;
  check(dve_image_hconcat(views.data(), views.size(), &grid_raw), "tiling failed");
  ImagePtr grid(grid_raw);

  fs::path report_path(report_arg);
  if (report_path.empty()) report_path = fs::path(a.out).replace_extension(".json");
  check(dve_image_write_png(grid.get(), a.out.c_str()), "cannot write " + a.out);
  write_text_atomic(report_path, report.dump(2) + "\n");
  return kExitOk;
}

struct SynthArgs {
  std::uint64_t seed = 42;
  std::size_t maps = 8;
  std::size_t size = 7;
  std::size_t classes = 10;
  std::size_t layers = 1;
  std::string content = "random";
  std::string weights = "random";
  std::optional<double> blur;
  std::string model_id;
  std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  dve_synthetic_options o;
  dve_synthetic_options_init(&o);
  o.seed = a.seed;
  o.maps = a.maps;
  o.size = a.size;
  o.classes = a.classes;
  o.layer_count = a.layers;
  o.content = a.content == "zero"       ? DVE_SYNTH_MAPS_ZERO
              : a.content == "constant" ? DVE_SYNTH_MAPS_CONSTANT
                                        : DVE_SYNTH_MAPS_RANDOM;
  o.weights = a.weights == "none"      ? DVE_SYNTH_WEIGHTS_NONE
              : a.weights == "one-hot" ? DVE_SYNTH_WEIGHTS_ONE_HOT
                                       : DVE_SYNTH_WEIGHTS_RANDOM;
  if (a.blur) {
    o.has_blur_sigma = 1;
    o.blur_sigma = *a.blur;
  }
  if (!a.model_id.empty()) o.model_id = a.model_id.c_str();
  dve_bundle* raw = nullptr;
  check(dve_bundle_synthetic(&o, &raw), "cannot build synthetic bundle");
  BundlePtr bundle(raw);
  check(dve_bundle_write(bundle.get(), a.out.c_str()), "cannot write bundle " + a.out);
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

void add_explain_flags(CLI::App* cmd, ExplainArgs& a, bool spectral) {
  cmd->add_option("--bundle", a.bundle, "Bundle directory")->required();
  cmd->add_option("--layer", a.layer, "Layer name (default: deepest)");
  cmd->add_option("--alpha", a.alpha, "Overlay opacity in [0,1]")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--out", a.out, "Overlay PNG path");
  cmd->add_option("--raw-out", a.raw_out, "Raw saliency map DVT path");
  if (spectral) {
    cmd->add_option("--sigma-low", a.sigma_low, "Low-pass Gaussian sigma (frequency bins)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sigma-high", a.sigma_high, "High-pass Gaussian sigma (frequency bins)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-noise-filter", a.no_noise_filter, "Sum raw band-pass terms");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deep visual explanation saliency maps from exported feature maps", "dve"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dve_version());

  ExplainArgs explain_args, targeted_args, gradcam_args, layers_args;
  SweepArgs sweep_args;
  std::string layers_report;
  SynthArgs synth_args;

  auto* explain = app.add_subcommand("explain", "DVE map for one bundle");
  add_explain_flags(explain, explain_args, true);

  auto* targeted = app.add_subcommand("targeted", "Targeted DVE map for one bundle");
  add_explain_flags(targeted, targeted_args, true);
  targeted->add_option("--refine-sigma-low", targeted_args.refine_sigma_low,
                       "Low-pass sigma of the refinement pass (default: --sigma-low)")
      ->check(CLI::PositiveNumber);
  targeted->add_option("--refine-sigma-high", targeted_args.refine_sigma_high,
                       "High-pass sigma of the refinement pass (default: --sigma-high)")
      ->check(CLI::PositiveNumber);

  auto* gradcam = app.add_subcommand("gradcam", "Grad-CAM baseline from exported channel weights");
  add_explain_flags(gradcam, gradcam_args, false);

  auto* sweep = app.add_subcommand("blur-sweep", "DVE over a series of blurred-image bundles");
  sweep->add_option("--bundles", sweep_args.bundles, "Directory of bundle directories")->required();
  sweep->add_option("--report", sweep_args.report, "SweepReport JSON path")->required();
  sweep->add_option("--out", sweep_args.out_dir, "Overlay directory (default: report's directory)");
  sweep->add_option("--layer", sweep_args.explain.layer, "Layer name (default: deepest)");
  sweep->add_option("--sigma-low", sweep_args.explain.sigma_low)->check(CLI::PositiveNumber);
  sweep->add_option("--sigma-high", sweep_args.explain.sigma_high)->check(CLI::PositiveNumber);
  sweep->add_option("--alpha", sweep_args.explain.alpha)->check(CLI::Range(0.0, 1.0));
  sweep->add_flag("--no-noise-filter", sweep_args.explain.no_noise_filter);

  auto* layers = app.add_subcommand("layers", "Per-layer DVE grid, shallow to deep");
  layers->add_option("--bundle", layers_args.bundle, "Bundle directory")->required();
  layers->add_option("--out", layers_args.out, "Grid PNG path")->required();
  layers->add_option("--report", layers_report, "Top-decile JSON (default: next to --out)");
  layers->add_option("--sigma-low", layers_args.sigma_low)->check(CLI::PositiveNumber);
  layers->add_option("--sigma-high", layers_args.sigma_high)->check(CLI::PositiveNumber);
  layers->add_option("--alpha", layers_args.alpha)->check(CLI::Range(0.0, 1.0));
  layers->add_flag("--no-noise-filter", layers_args.no_noise_filter);

  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic bundle");
  synth->add_option("--out", synth_args.out, "Bundle directory")->required();
  synth->add_option("--seed", synth_args.seed);
  synth->add_option("--maps", synth_args.maps, "K")->check(CLI::PositiveNumber);
  synth->add_option("--size", synth_args.size, "M = N of the deepest layer");
  synth->add_option("--classes", synth_args.classes, "C")->check(CLI::PositiveNumber);
  synth->add_option("--layers", synth_args.layers);
  synth->add_option("--content", synth_args.content)
      ->check(CLI::IsMember({"random", "zero", "constant"}));
  synth->add_option("--weights", synth_args.weights)
      ->check(CLI::IsMember({"random", "none", "one-hot"}));
  synth->add_option("--blur-sigma", synth_args.blur)->check(CLI::NonNegativeNumber);
  synth->add_option("--model-id", synth_args.model_id);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (explain->parsed()) return cmd_explain(explain_args, false, out);
    if (targeted->parsed()) return cmd_explain(targeted_args, true, out);
    if (gradcam->parsed()) return cmd_gradcam(gradcam_args, out);
    if (sweep->parsed()) return cmd_blur_sweep(sweep_args, out);
    if (layers->parsed()) return cmd_layers(layers_args, layers_report, out);
    if (synth->parsed()) return cmd_synth(synth_args, out);
  } catch (const ApiError& e) {
    err << "dve: " << e.what() << "\n";
    return exit_code_for(e.status());
  } catch (const CommandError& e) {
    err << "dve: " << e.what() << "\n";
    return e.code();
  } catch (const UsageError& e) {
    err << "dve: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "dve: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace dve::cli
