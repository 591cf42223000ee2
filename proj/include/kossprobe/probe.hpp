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

// First-order-in-t detection rates and the 6x6 probe matrix M with
// rates = M * (C11, C12, C13, C22, C23, C33).

#pragma once

#include <array>
#include <numbers>
#include <string_view>
#include <vector>

#include "kossprobe/kossakowski.hpp"
#include "kossprobe/scattering.hpp"
#include "kossprobe/spin_algebra.hpp"

namespace kossprobe {

// sin(2kx) = 1, cos(2kx) = 0 at the reflected-side probe point.
inline constexpr double kQuarterWavePhase = std::numbers::pi / 2.0;

bool is_canonical_phase(double theta);

// Channel order (P0T, P1T, P2T, P0R, P1R, P2R).
inline constexpr std::array<const char*, 6> kChannelLabels{"P0T", "P1T", "P2T",
                                                           "P0R", "P1R", "P2R"};

// <phi(x)| D_basis |phi(x)> where D_basis is the D-tilde matrix of the
// rotated basis. The whole two-qubit spin basis is rotated, which is the same
// as replacing C by O^T C O with R^dag sigma_i R = sum_j O_ij sigma_j.
// theta is ignored on the transmitted side.
double probability_rate(const KossakowskiMatrix& c, const ScatteringCoefficients& coeffs,
                        BasisLabel basis, Side side, double theta = kQuarterWavePhase);

// The Kossakowski matrix seen through a rotated basis, O^T C O.
KossakowskiMatrix rotate_for_basis(const KossakowskiMatrix& c, BasisLabel basis);

struct ProbeResult {
  Vector6d rates = Vector6d::Zero();  // probability per unit time
  double g = 0.0;
  double phase = kQuarterWavePhase;
  bool canonical_phase = true;
};

ProbeResult forward(const KossakowskiMatrix& c, const ScatteringCoefficients& coeffs,
                    double theta = kQuarterWavePhase);

enum class MatrixSource { programmatic, appendix };
std::string_view to_string(MatrixSource source);

struct ProbeMatrix {
  Matrix6d m = Matrix6d::Zero();
  double det = 0.0;
  double condition_number = 0.0;  // sigma_max / sigma_min, +inf if singular
  MatrixSource source = MatrixSource::programmatic;
  double g = 0.0;
  double phase = kQuarterWavePhase;
};

// Column beta is forward(unit_beta).
ProbeMatrix build_matrix_programmatic(const ScatteringCoefficients& coeffs,
                                      double theta = kQuarterWavePhase);

// Entry constants of the tabulated closed form at the quarter-wave phase.
struct AppendixCoefficients {
  double a0, a1, b, c, d0, d1, e, f;
};
AppendixCoefficients appendix_coefficients(const ScatteringCoefficients& coeffs);

// The tabulated closed form, assembled verbatim from appendix_coefficients.
ProbeMatrix build_matrix_appendix(const ScatteringCoefficients& coeffs);

// Determinant and 2-norm condition number of a 6x6 matrix.
void analyse(ProbeMatrix& pm);

struct EntryDeviation {
  int row = 0;
  int col = 0;
  double reference = 0.0;
  double candidate = 0.0;
};

struct MatrixDeviation {
  double max_abs = 0.0;
  std::vector<EntryDeviation> entries;  // |candidate - reference| > tol
};

MatrixDeviation compare(const ProbeMatrix& reference, const ProbeMatrix& candidate,
                        double tol = 1e-12);

}  // namespace kossprobe
