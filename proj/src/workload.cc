// Copyright 2026 The SLE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sle/workload.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "sle/errors.h"
#include "sle/random.h"
#include "sle/systolic_model.h"

namespace sle {
namespace {

std::vector<int64_t> GridValues(const RegimeGrid& g) {
  std::vector<int64_t> v;
  for (int64_t x = g.lo; x <= g.hi; x += g.step) v.push_back(x);
  return v;
}

std::vector<int64_t> Divisors(int64_t n) {
  std::vector<int64_t> small, large;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

Shape RandomFactorization(int64_t size, Rng& rng) {
  const int rank = 1 + static_cast<int>(rng.Below(4));
  Shape dims;
  int64_t rest = size;
  for (int i = 0; i + 1 < rank; ++i) {
    const std::vector<int64_t> divs = Divisors(rest);
    const int64_t d = divs[rng.Below(divs.size())];
    dims.push_back(d);
    rest /= d;
  }
  dims.push_back(rest);
  return dims;
}

double NoiseFactor(double noise_pct, Rng& rng) {
  return 1.0 + noise_pct / 100.0 * rng.Normal();
}

}  // namespace

std::string_view SweepModeName(SweepMode mode) {
  return mode == SweepMode::kProduct ? "product" : "axis";
}

SweepMode ParseSweepMode(std::string_view name) {
  if (name == "product") return SweepMode::kProduct;
  if (name == "axis") return SweepMode::kAxis;
  throw Error("unknown sweep mode '" + std::string(name) +
              "' (expected product or axis)");
}

RegimeGrid DefaultGrid(Regime regime) {
  switch (regime) {
    case Regime::kSmall:
      return {32, 128, 16};
    case Regime::kMedium:
      return {128, 1024, 128};
    case Regime::kLarge:
      return {1024, 4096, 512};
  }
  return {};
}

std::vector<GemmShape> GemmSweep(const SweepSpec& spec) {
  RegimeGrid grid = DefaultGrid(spec.regime);
  if (spec.step < 0) throw Error("sweep step must be positive");
  if (spec.step > 0) grid.step = spec.step;
  const std::vector<int64_t> values = GridValues(grid);
  std::vector<GemmShape> out;
  if (spec.mode == SweepMode::kProduct) {
    for (int64_t m : values) {
      for (int64_t k : values) {
        for (int64_t n : values) out.push_back({m, k, n});
      }
    }
    return out;
  }
  const int64_t n_steps = (grid.hi - grid.lo) / grid.step;
  const int64_t mid = grid.lo + (n_steps + 1) / 2 * grid.step;
  for (int axis = 0; axis < 3; ++axis) {
    for (int64_t v : values) {
      GemmShape s{mid, mid, mid};
      (axis == 0 ? s.m : axis == 1 ? s.k : s.n) = v;
      out.push_back(s);
    }
  }
  return out;
}

ElementwiseSweeps ElementwiseManualSweeps() {
  ElementwiseSweeps s;
  for (int64_t len = 32; len <= 8192; len += 32) s.sweep_1d.push_back({len});
  for (int64_t a = 64; a <= 1024; a += 64) {
    for (int64_t b = 64; b <= 1024; b += 64) s.sweep_2d.push_back({a, b});
  }
  return s;
}

std::vector<Shape> Pow2BoundaryShapes(int64_t max_elements) {
  std::vector<int64_t> dims;
  for (int n = 5; n <= 12; ++n) {
    const int64_t p = int64_t{1} << n;
    for (int64_t d : {p - 1, p, p + 1}) dims.push_back(d);
  }
  std::vector<Shape> out;
  for (int64_t d : dims) {
    if (d <= max_elements) out.push_back({d});
  }
  for (int64_t a : dims) {
    for (int64_t b : dims) {
      if (a * b <= max_elements) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<Shape> ShapeDataset(const ShapeDatasetSpec& spec) {
  if (spec.max_elements < 32) throw Error("max_elements must be >= 32");
  if (spec.samples < 0) throw Error("samples must be >= 0");
  if (spec.factorizations_per_size < 1) {
    throw Error("factorizations_per_size must be >= 1");
  }
  Rng rng(spec.seed);
  const double log_lo = std::log(32.0);
  const double log_hi = std::log(static_cast<double>(spec.max_elements));
  std::vector<Shape> out;
  for (int i = 0; i < spec.samples; ++i) {
    const int64_t size = std::clamp<int64_t>(
        std::llround(std::exp(rng.Uniform(log_lo, log_hi))), 32,
        spec.max_elements);
    std::set<Shape> seen;
    const int attempts = 4 * spec.factorizations_per_size;
    for (int a = 0; a < attempts &&
                    static_cast<int>(seen.size()) < spec.factorizations_per_size;
         ++a) {
      Shape s = RandomFactorization(size, rng);
      if (seen.insert(s).second) out.push_back(std::move(s));
    }
  }
  if (spec.include_pow2_boundary) {
    for (Shape& s : Pow2BoundaryShapes(spec.max_elements)) {
      out.push_back(std::move(s));
    }
  }
  return out;
}

GemmGroundTruth DefaultGemmGroundTruth() {
  GemmGroundTruth t;
  t.lines[Regime::kSmall] = {1.0e-9, 0.5e-6};
  t.lines[Regime::kMedium] = {0.8e-9, 1.5e-6};
  t.lines[Regime::kLarge] = {0.75e-9, 4.0e-6};
  return t;
}

std::vector<MeasurementRecord> SynthGemmMeasurements(
    const std::vector<GemmShape>& shapes, const GemmGroundTruth& truth,
    double noise_pct, uint64_t seed) {
  Rng rng(seed);
  std::vector<MeasurementRecord> out;
  for (const GemmShape& shape : shapes) {
    const auto it = truth.lines.find(RegimeFor(shape));
    if (it == truth.lines.end()) {
      throw Error("ground truth has no line for regime '" +
                  std::string(RegimeName(RegimeFor(shape))) + "'");
    }
    MeasurementRecord r;
    r.gemm = shape;
    r.cycles = GemmCycles(shape, truth.array).total_cycles;
    const double clean = it->second.alpha_s_per_cycle *
                             static_cast<double>(r.cycles) +
                         it->second.beta_s;
    do {
      r.latency_s = noise_pct == 0.0 ? clean : clean * NoiseFactor(noise_pct, rng);
    } while (!(r.latency_s > 0.0));
    out.push_back(r);
  }
  return out;
}

double ElementwiseLawSeconds(const Shape& shape) {
  double elements = 1.0;
  for (int64_t d : shape) elements *= static_cast<double>(d);
  const bool aligned = !shape.empty() && shape[0] % 256 == 0;
  const double us = 0.8 + 0.002 * elements / 1000.0 + (aligned ? 0.3 : 0.0);
  return us * 1e-6;
}

std::vector<ElementwiseSample> SynthElementwiseMeasurements(
    std::string_view op_tag, const std::vector<Shape>& shapes,
    double noise_pct, uint64_t seed) {
  Rng rng(seed);
  std::vector<ElementwiseSample> out;
  for (const Shape& shape : shapes) {
    ElementwiseSample s;
    s.op_tag = std::string(op_tag);
    s.shape = shape;
    const double clean = ElementwiseLawSeconds(shape);
    do {
      s.latency_s = noise_pct == 0.0 ? clean : clean * NoiseFactor(noise_pct, rng);
    } while (!(s.latency_s > 0.0));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sle
