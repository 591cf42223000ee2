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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "kossprobe/errors.hpp"
#include "kossprobe/serialization.hpp"

using namespace kossprobe;
using nlohmann::json;

TEST_CASE("Kossakowski JSON forms") {
  const KossakowskiMatrix c(1, 0.5, -0.25, 2, 0.125, 3);
  const json j = io::to_json(c);
  CHECK(io::kossakowski_from_json(j) == c);
  CHECK(io::kossakowski_from_json(json{{"kossakowski", j}}) == c);
  const json arr = json::parse("[[1, 0.5, -0.25], [0.5, 2, 0.125], [-0.25, 0.125, 3]]");
  CHECK(io::kossakowski_from_json(arr) == c);
  CHECK_THROWS_AS(io::kossakowski_from_json(json::parse(R"({"c11": 1})")), InputError);
  CHECK_THROWS_AS(io::kossakowski_from_json(json::parse("[[1, 2, 3], [0, 1, 0], [0, 0, 1]]")),
                  InputError);
  CHECK_THROWS_AS(io::kossakowski_from_json(json::parse("[[1, 0], [0, 1]]")), InputError);
  CHECK_THROWS_AS(io::kossakowski_from_json(json::parse(
                      R"({"c11": "x", "c12": 0, "c13": 0, "c22": 1, "c23": 0, "c33": 1})")),
                  InputError);
}

TEST_CASE("complex matrices round-trip") {
  kptest::for_all(20, 71, [](kptest::Gen& g) {
    const ComplexMatrix m = g.two_qubit_state();
    CHECK(io::matrix_from_json(io::matrix_to_json(m)) == m);
  });
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[[1, 0]], [[1, 0], [0, 0]]]")), InputError);
}

TEST_CASE("doubles print in shortest round-trip form") {
  kptest::for_all(500, 72, [](kptest::Gen& g) {
    const double v = g.normal() * std::pow(10.0, g.uniform(-300, 300));
    CHECK(std::stod(io::format_double(v)) == v);
  });
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(4.0) == "4");
}

TEST_CASE("experiment runs round-trip through JSON") {
  ExperimentConfig cfg;
  cfg.true_c = KossakowskiMatrix::diagonal(1, 1, -1);
  cfg.g = 2.0;
  cfg.exposure = 0.01;
  cfg.shots_per_channel = 1000;
  cfg.seed = 3;
  ExperimentRun r = run(cfg);
  r.timestamp = "2026-01-01T00:00:00Z";
  const json j = json::parse(io::to_json(r).dump());
  CHECK(j["schema_version"] == io::kSchemaVersion);
  CHECK(j["kind"] == "experiment_run");
  CHECK(j["unphysical_rate_channels"].size() == 2);
  CHECK(io::experiment_run_from_json(j) == r);

  json tampered = j;
  tampered["config"]["seed"] = 4;
  CHECK_THROWS_AS(io::experiment_run_from_json(tampered), InputError);
  json broken = j;
  broken["channels"][0]["detections"] = 5000;
  CHECK_THROWS_AS(io::experiment_run_from_json(broken), InputError);
  CHECK_THROWS_AS(io::experiment_run_from_json(json::object()), InputError);
}

TEST_CASE("run CSV layout") {
  ExperimentConfig cfg;
  cfg.true_c = KossakowskiMatrix::identity();
  cfg.g = 2.0;
  cfg.exposure = 0.01;
  cfg.shots_per_channel = 1000;
  cfg.seed = 3;
  const ExperimentRun r = run(cfg);
  const std::string csv = io::run_to_csv(r);
  CHECK(csv.rfind("label,N,k,p_hat,sigma\nP0T,1000,", 0) == 0);
  const io::RateTable t = io::rate_table_from_csv(csv, 0.01);
  REQUIRE(t.sigmas.has_value());
  for (int k = 0; k < 6; ++k) {
    CHECK(t.rates(k) == doctest::Approx(r.channels[k].p_hat() / 0.01));
    CHECK((*t.sigmas)(k) == doctest::Approx(r.channels[k].sigma() / 0.01));
  }
  CHECK_THROWS_AS(io::rate_table_from_csv(csv, std::nullopt), InputError);
}

TEST_CASE("rate CSV round-trip and errors") {
  io::RateTable t;
  t.rates << 1.5, -0.25, 3, 4, 5, 6;
  CHECK(io::rates_to_csv(t).rfind("label,rate\nP0T,1.5\n", 0) == 0);
  const io::RateTable back = io::rate_table_from_csv(io::rates_to_csv(t), std::nullopt);
  CHECK(back.rates == t.rates);
  CHECK_FALSE(back.sigmas.has_value());
  t.sigmas = Vector6d::Constant(0.5);
  CHECK(*io::rate_table_from_csv(io::rates_to_csv(t), std::nullopt).sigmas == *t.sigmas);

  CHECK_THROWS_AS(io::rate_table_from_csv("label,value\n", std::nullopt), InputError);
  CHECK_THROWS_AS(io::rate_table_from_csv("label,rate\nP0T,1\n", std::nullopt), InputError);
  CHECK_THROWS_AS(io::rate_table_from_csv("label,rate\nP9T,1\n", std::nullopt), InputError);
  CHECK_THROWS_AS(io::rate_table_from_csv("label,rate\nP0T,abc\n", std::nullopt), InputError);
  CHECK_THROWS_AS(io::rate_table_from_csv("label,rate\nP0T,1\nP0T,2\n", std::nullopt), InputError);
}

TEST_CASE("payloads carry schema metadata") {
  const ProbeMatrix m = build_matrix_programmatic(coefficients(0.0));
  const json j = io::to_json(m);
  CHECK(j["schema_version"] == 1);
  CHECK(j["kind"] == "probe_matrix");
  CHECK(j["matrix"].size() == 6);
  const json cp = io::to_json(KossakowskiMatrix::identity().cp_check());
  CHECK(cp["conditions"].size() == 7);
  CHECK(cp["verdict"] == "completely positive");
  const json singular = io::to_json(ProbeMatrix{});
  CHECK(singular["condition_number"].is_number());
  ProbeMatrix inf_cond;
  inf_cond.condition_number = std::numeric_limits<double>::infinity();
  CHECK(io::to_json(inf_cond)["condition_number"].is_null());
}
