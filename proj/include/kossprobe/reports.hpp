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

// Machine-readable reports shared by the CLI, the acceptance suite and the
// Python module.

#pragma once

#include <cstdint>

#include <json.hpp>

namespace kossprobe::reports {

struct AdjudicationOptions {
  int trials = 100;
  std::uint64_t seed = 20240917;
  double tolerance = 1e-12;
};

// Closed forms against the brute-force oracle:
//  * d_tilde on random symmetric and random Hermitian C,
//  * forward rates on random symmetric C at g in {0.5, 2, 5},
//  * the tabulated appendix matrix against the programmatic one,
//  * which reflection/phase convention reproduces the tabulated P0R
//    coefficients.
// "passed" covers only the closed-form checks; appendix deviations are
// findings, not failures.
struct Adjudication {
  nlohmann::json report;
  bool passed = false;
};

Adjudication adjudicate(const AdjudicationOptions& options = {});

// C = diag(1, 1, -1): CP verdict, the six rates, Bloch-ball positivity of the
// single-qubit semigroup over t in [0, 5], and the negative eigenvalue of the
// lifted evolution of |psi3><psi3| at small t.
nlohmann::json negative_rate_demo(double g);

}  // namespace kossprobe::reports
