// Copyright 2026 The kossprobe Authors
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

#include "kossprobe/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "kossprobe/errors.hpp"
#include "kossprobe/scattering.hpp"

namespace kossprobe {

namespace {

std::uint64_t count_detections(std::uint64_t trials, double p, std::uint64_t seed) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  // Compare raw 64-bit draws against p * 2^64; exact and platform independent.
  const auto threshold = static_cast<std::uint64_t>(std::ldexp(p, 64));
  std::mt19937_64 engine(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < trials; ++n) hits += engine() < threshold ? 1 : 0;
  return hits;
}

class Fnv1a {
 public:
  void add(std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      state_ ^= (v >> (8 * byte)) & 0xffu;
      state_ *= 0x100000001b3ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

void require_same_setup(const ExperimentConfig& a, const ExperimentConfig& b) {
  if (a.g != b.g || a.phase != b.phase || a.exposure != b.exposure ||
      a.calibration != b.calibration) {
    throw InputError(
        "estimate: runs must share coupling, phase, exposure and calibration to be pooled");
  }
}

}  // namespace

std::vector<std::string> config_violations(const ExperimentConfig& config) {
  std::vector<std::string> out;
  if (!std::isfinite(config.g)) out.emplace_back("coupling g must be finite");
  if (!std::isfinite(config.phase)) out.emplace_back("phase must be finite");
  if (!(config.exposure > 0.0) || !std::isfinite(config.exposure)) {
    out.emplace_back("exposure must be positive and finite");
  }
  if (!(config.calibration > 0.0 && config.calibration <= 1.0)) {
    out.emplace_back("calibration must lie in (0, 1]");
  }
  if (config.shots_per_channel == 0) out.emplace_back("shots per channel must be positive");
  const Vector6d c = config.true_c.as_vector();
  if (!c.allFinite()) out.emplace_back("Kossakowski entries must be finite");
  if (!out.empty()) return out;

  const ProbeResult rates = forward(config.true_c, coefficients(config.g), config.phase);
  for (int k = 0; k < 6; ++k) {
    const double p = config.calibration * config.exposure * rates.rates(k);
    if (p > kMaxShotProbability) {
      std::ostringstream msg;
      msg << "channel " << kChannelLabels[k] << " has per-shot probability " << p
          << " > " << kMaxShotProbability << " (first-order expansion no longer valid)";
      out.push_back(msg.str());
    }
  }
  return out;
}

void validate(const ExperimentConfig& config) {
  const auto violations = config_violations(config);
  if (violations.empty()) return;
  std::string msg = "invalid experiment config:";
  for (const auto& v : violations) msg += "\n  - " + v;
  throw InputError(msg);
}

double ChannelRecord::p_hat() const {
  return trials == 0 ? 0.0 : static_cast<double>(detections) / static_cast<double>(trials);
}

double ChannelRecord::sigma() const {
  if (trials == 0) return 0.0;
  const double p = p_hat();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::vector<std::string> ExperimentRun::unphysical_channels() const {
  std::vector<std::string> out;
  for (const auto& ch : channels) {
    if (ch.model_rate < 0.0) out.push_back(ch.label);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string config_hash(const ExperimentConfig& config) {
  Fnv1a h;
  const Vector6d c = config.true_c.as_vector();
  for (int k = 0; k < 6; ++k) h.add(c(k));
  h.add(config.g);
  h.add(config.phase);
  h.add(config.exposure);
  h.add(config.calibration);
  h.add(config.shots_per_channel);
  h.add(config.seed);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

ExperimentRun run(const ExperimentConfig& config) {
  validate(config);
  const ProbeResult model = forward(config.true_c, coefficients(config.g), config.phase);

  ExperimentRun out;
  out.config = config;
  out.config_hash = config_hash(config);
  for (int k = 0; k < 6; ++k) {
    auto& ch = out.channels[k];
    const double p = config.calibration * config.exposure * model.rates(k);
    ch.label = kChannelLabels[k];
    ch.trials = config.shots_per_channel;
    ch.model_rate = model.rates(k);
    ch.clamped = p < 0.0 || p > 1.0;
    ch.probability = std::clamp(p, 0.0, 1.0);
  }

  {
    std::vector<std::jthread> workers;
    workers.reserve(6);
    for (int k = 0; k < 6; ++k) {
      workers.emplace_back([&out, &config, k] {
        auto& ch = out.channels[k];
        ch.detections = count_detections(ch.trials, ch.probability, derive_seed(config.seed, k));
      });
    }
  }
  return out;
}

PooledRates pool(std::span<const ExperimentRun> runs) {
  if (runs.empty()) throw InputError("estimate: at least one run is required");
  const ExperimentConfig& ref = runs.front().config;
  PooledRates out;
  for (const auto& r : runs) {
    require_same_setup(ref, r.config);
    for (int k = 0; k < 6; ++k) {
      out.trials[k] += r.channels[k].trials;
      out.detections[k] += r.channels[k].detections;
    }
  }
  const double scale = ref.calibration * ref.exposure;
  for (int k = 0; k < 6; ++k) {
    const double n = static_cast<double>(out.trials[k]);
    if (n == 0.0) throw InputError("estimate: channel with zero trials");
    const double p = static_cast<double>(out.detections[k]) / n;
    const double p_floor = 0.5 / n;
    const double p_sigma = std::clamp(p, p_floor, 1.0 - p_floor);
    out.rates(k) = p / scale;
    out.sigmas(k) = std::sqrt(p_sigma * (1.0 - p_sigma) / n) / scale;
  }
  return out;
}

InversionResult estimate(std::span<const ExperimentRun> runs, const ProbeMatrix& m,
                         const InversionOptions& options) {
  const PooledRates pooled = pool(runs);
  return invert_noisy(pooled.rates, pooled.sigmas, m, options);
}

InversionResult estimate(std::span<const ExperimentRun> runs, const InversionOptions& options) {
  if (runs.empty()) throw InputError("estimate: at least one run is required");
  const auto& cfg = runs.front().config;
  return estimate(runs, build_matrix_programmatic(coefficients(cfg.g), cfg.phase), options);
}

}  // namespace kossprobe
