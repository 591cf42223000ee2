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

// JSON and CSV encodings of the library's value types. Every top-level JSON
// document carries "schema_version" and "kind".

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "kossprobe/experiment.hpp"
#include "kossprobe/inversion.hpp"
#include "kossprobe/kossakowski.hpp"
#include "kossprobe/probe.hpp"
#include "kossprobe/scattering.hpp"
#include "kossprobe/spin_algebra.hpp"

namespace kossprobe::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Nested arrays of [re, im] pairs, row by row.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json real_matrix_to_json(const Eigen::MatrixXd& m);

// {"c11": .., "c12": .., "c13": .., "c22": .., "c23": .., "c33": ..}. Reading also
// accepts a 3x3 nested array or either form wrapped as {"kossakowski": ..}.
json to_json(const KossakowskiMatrix& c);
KossakowskiMatrix kossakowski_from_json(const json& j);

json to_json(const CpReport& r);
json to_json(const ScatteringCoefficients& c);
json to_json(const ProbeResult& r);
json to_json(const ProbeMatrix& m);
json to_json(const MatrixDeviation& d);
json to_json(const InversionResult& r);

json to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const json& j);
json to_json(const ExperimentRun& r);
ExperimentRun experiment_run_from_json(const json& j);

// Header "label,N,k,p_hat,sigma", one row per channel.
std::string run_to_csv(const ExperimentRun& r);

struct RateTable {
  Vector6d rates = Vector6d::Zero();
  std::optional<Vector6d> sigmas;
};

// Header "label,rate" or "label,rate,sigma"; rows in channel order.
std::string rates_to_csv(const RateTable& t);

// Accepts a rate CSV ("label,rate[,sigma]") or a run CSV
// ("label,N,k,p_hat,sigma"); for the latter the caller supplies
// calibration * exposure through rate_scale to turn p_hat into rates.
RateTable rate_table_from_csv(const std::string& text, std::optional<double> rate_scale);

// Shortest round-trip decimal representation.
std::string format_double(double v);

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace kossprobe::io
