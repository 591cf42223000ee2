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

// Recovering the Kossakowski matrix from measured rates.

#pragma once

#include <cstdint>
#include <string_view>

#include "kossprobe/kossakowski.hpp"
#include "kossprobe/probe.hpp"

namespace kossprobe {

inline constexpr double kMaxConditionNumber = 1e10;

// Solves M c = rates with partial pivoting. Throws NumericalRefusal when the
// condition number exceeds max_condition (including singular M).
KossakowskiMatrix invert_exact(const Vector6d& rates, const ProbeMatrix& m,
                               double max_condition = kMaxConditionNumber);
KossakowskiMatrix invert_exact(const ProbeResult& rates, const ProbeMatrix& m,
                               double max_condition = kMaxConditionNumber);

enum class CpVerdict { cp, not_cp, indeterminate };
std::string_view to_string(CpVerdict v);

struct InversionOptions {
  double z = 3.0;                 // significance required for a not-CP verdict
  int bootstrap_samples = 2000;   // parametric draws for sigma of lambda_min
  std::uint64_t seed = 0x5eed;
  double max_condition = kMaxConditionNumber;
};

struct InversionResult {
  KossakowskiMatrix c_hat;
  Matrix6d covariance = Matrix6d::Zero();  // of (C11, C12, C13, C22, C23, C33)
  double residual_norm = 0.0;
  CpVerdict verdict = CpVerdict::indeterminate;
  double margin = 0.0;        // lambda_min(c_hat)
  double margin_sigma = 0.0;  // bootstrap spread of lambda_min
  double condition_number = 0.0;
  CpReport diagnostics;

  Vector6d standard_errors() const { return covariance.diagonal().cwiseSqrt(); }
};

// Exact solve of the mean rates plus linear error propagation
// cov = M^-1 diag(sigma^2) M^-T. Verdict: cp if lambda_min >= 0, not_cp if
// lambda_min <= -z sigma_lambda, indeterminate otherwise. Zero sigmas are the
// noiseless limit; negative or non-finite sigmas raise InputError.
InversionResult invert_noisy(const Vector6d& rates, const Vector6d& sigmas, const ProbeMatrix& m,
                             const InversionOptions& options = {});

// Nearest PSD matrix in Frobenius norm (eigenvalues clipped at zero).
KossakowskiMatrix psd_project(const KossakowskiMatrix& c);

}  // namespace kossprobe
