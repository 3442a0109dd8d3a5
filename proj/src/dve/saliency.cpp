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
#include "dve/saliency.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "dve/error.hpp"

namespace dve {

std::string_view saliency_kind_name(SaliencyKind kind) noexcept {
  switch (kind) {
    case SaliencyKind::kDve: return "dve";
    case SaliencyKind::kTargetedDve: return "targeted_dve";
    case SaliencyKind::kGradcam: return "gradcam";
  }
  return "unknown";
}

NoiseKernel noise_kernel(const RealGrid& s) {
  if (s.rows() != s.cols()) {
    fail(ErrorCode::kNonSquare, "noise kernel requires square maps, got " +
                                    std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  }
  const std::size_t m = s.rows();
  NoiseKernel nk{std::vector<double>(m, 0.0), RealGrid(m, m), RealGrid(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) nk.row_energy[i] += s(i, j) * s(i, j);
  }
  // Filled as an upper triangle and mirrored, so symmetry is exact.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double gram = 0.0;
      for (std::size_t t = 0; t < m; ++t) gram += s(i, t) * s(j, t);
      const double d = nk.row_energy[i] + nk.row_energy[j] - gram;
      nk.distance(i, j) = d;
      nk.distance(j, i) = d;
      nk.kernel(i, j) = 1.0 / (1.0 + d);
      nk.kernel(j, i) = nk.kernel(i, j);
    }
  }
  return nk;
}

RealGrid apply_noise_filter(const RealGrid& s) {
  const auto nk = noise_kernel(s);
  RealGrid out = s;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] *= 1.0 + nk.distance.values()[i];
  }
  return out;
}

RealGrid explain_term(const DftPlan& plan, const RealGrid& x, const FrequencyMask& low,
                      const FrequencyMask& high, bool noise_filter) {
  auto term = bandpass_term(plan, x, low, high);
  return noise_filter ? apply_noise_filter(term) : term;
}

std::size_t resolve_thread_count(std::size_t requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

SaliencyMap explain_stack(const FeatureMapStack& stack, const FrequencyMask& low,
                          const FrequencyMask& high, const ExplainOptions& options,
                          std::size_t class_index) {
  if (!stack.square()) {
    fail(ErrorCode::kNonSquare, "noise kernel requires square maps; layer '" +
                                    stack.layer_name() + "' is " + std::to_string(stack.rows()) +
                                    "x" + std::to_string(stack.cols()));
  }
  const std::size_t count = stack.count();
  const DftPlan plan(stack.rows(), stack.cols());
  std::vector<RealGrid> terms(count);

  const std::size_t workers = std::min(resolve_thread_count(options.threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      terms[i] = explain_term(plan, stack.map(i), low, high, options.noise_filter);
    }
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w * count / workers; i < (w + 1) * count / workers; ++i) {
            terms[i] = explain_term(plan, stack.map(i), low, high, options.noise_filter);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Serial reduction in map order keeps the sum independent of partitioning.
  RealGrid total(stack.rows(), stack.cols());
  for (const auto& term : terms) total += term;
  return {std::move(total), stack.layer_name(), class_index, SaliencyKind::kDve};
}

SaliencyMap targeted_refine(const SaliencyMap& s, const FrequencyMask& low,
                            const FrequencyMask& high) {
  if (s.kind != SaliencyKind::kDve) {
    fail(ErrorCode::kInvalidArgument, "targeted refinement applies to DVE maps only");
  }
  return {bandpass_term(s.values, low, high), s.layer_name, s.class_index,
          SaliencyKind::kTargetedDve};
}

SaliencyMap gradcam_map(const FeatureMapStack& stack, const Tensor& weights,
                        std::size_t class_index) {
  if (weights.rank() != 1 || weights.size() != stack.count()) {
    fail(ErrorCode::kShapeMismatch, "gradcam weights length does not match channel count");
  }
  RealGrid out(stack.rows(), stack.cols());
  for (std::size_t k = 0; k < stack.count(); ++k) {
    const double w = weights.values()[k];
    const auto plane = stack.map_values(k);
    for (std::size_t i = 0; i < plane.size(); ++i) out.values()[i] += w * plane[i];
  }
  for (double& v : out.values()) v = std::max(0.0, v);
  return {std::move(out), stack.layer_name(), class_index, SaliencyKind::kGradcam};
}

}  // namespace dve
