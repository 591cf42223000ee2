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

// Virtual laboratory: shot-by-shot detection with a known Kossakowski
// matrix, aggregated into empirical rates and fed to the inversion.
//
// Each detector is an ideal projective yes/no measurement onto the probe
// state. A shot in channel alpha fires with probability
//   p_alpha = clamp(calibration * exposure * rate_alpha, 0, 1).

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kossprobe/inversion.hpp"
#include "kossprobe/kossakowski.hpp"
#include "kossprobe/probe.hpp"

namespace kossprobe {

// Largest per-shot probability for which the first-order expansion in the
// exposure time is trusted.
inline constexpr double kMaxShotProbability = 0.2;

struct ExperimentConfig {
  KossakowskiMatrix true_c;
  double g = 0.0;
  double phase = kQuarterWavePhase;
  double exposure = 0.0;     // dimensionless time per shot
  double calibration = 1.0;  // detection efficiency in (0, 1]
  std::uint64_t shots_per_channel = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Human-readable list of violated guards; empty when the config is valid.
std::vector<std::string> config_violations(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

struct ChannelRecord {
  std::string label;
  std::uint64_t trials = 0;
  std::uint64_t detections = 0;
  double model_rate = 0.0;   // forward-model rate
  double probability = 0.0;  // per-shot probability actually simulated
  bool clamped = false;      // model probability fell outside [0, 1]

  double p_hat() const;
  double sigma() const;  // sqrt(p_hat (1 - p_hat) / N)

  friend bool operator==(const ChannelRecord&, const ChannelRecord&) = default;
};

struct ExperimentRun {
  ExperimentConfig config;
  std::array<ChannelRecord, 6> channels;
  std::string config_hash;
  std::optional<std::string> timestamp;

  // Channels whose model rate is negative: the map is not completely
  // positive and the probability had to be clamped to zero.
  std::vector<std::string> unphysical_channels() const;

  friend bool operator==(const ExperimentRun&, const ExperimentRun&) = default;
};

// splitmix64 finaliser of master + stream * golden gamma. Substreams are
// independent of the order in which channels are simulated.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// FNV-1a over the bit patterns of every config field, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// Deterministic in (config, seed); channels run concurrently.
ExperimentRun run(const ExperimentConfig& config);

struct PooledRates {
  Vector6d rates = Vector6d::Zero();
  Vector6d sigmas = Vector6d::Zero();
  std::array<std::uint64_t, 6> trials{};
  std::array<std::uint64_t, 6> detections{};
};

// Pools counts across runs and rescales to rates by 1/(calibration * exposure).
// A channel with zero (or all) detections gets the uncertainty of
// p = 1/(2N) so the covariance stays non-degenerate. Runs must share
// (g, phase, exposure, calibration); InputError otherwise.
PooledRates pool(std::span<const ExperimentRun> runs);

InversionResult estimate(std::span<const ExperimentRun> runs, const ProbeMatrix& m,
                         const InversionOptions& options = {});
// Builds the programmatic probe matrix from the runs' (g, phase).
InversionResult estimate(std::span<const ExperimentRun> runs,
                         const InversionOptions& options = {});

}  // namespace kossprobe
