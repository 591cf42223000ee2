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

// Transmission and reflection of an electron off a magnetic delta impurity.
//
// The contact interaction (J/2)(S^2 - 3/2) delta(x) splits into a singlet
// channel (S^2 = 0) and a triplet channel (S^2 = 2). With the dimensionless
// coupling g = pi J rho(E) / 4 the transmission amplitudes are
//   t_i = 1 / (1 + i alpha_i),  alpha_0 = -3g/2,  alpha_1 = g/2,
// and continuity of the wavefunction at x = 0 fixes r_i = t_i - 1.

#pragma once

#include <optional>

#include "kossprobe/spin_algebra.hpp"

namespace kossprobe {

// Physical inputs in any consistent unit system.
struct PhysicalInputs {
  double coupling_j = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  double hbar = 0.0;
};

struct ScatteringParams {
  double g = 0.0;
  // Wavenumber; only needed to evaluate wavefunctions at a position.
  std::optional<double> k;
  std::optional<PhysicalInputs> physical;

  static ScatteringParams dimensionless(double g, std::optional<double> k = std::nullopt);
  // g = pi J rho(E) / 4 with rho(E) = sqrt(2m/E) / (pi hbar), k = sqrt(2mE)/hbar.
  // Throws InputError for E <= 0, m <= 0 or hbar <= 0.
  static ScatteringParams from_physical(const PhysicalInputs& in);

  // Attractive coupling is representable but unusual for this probe.
  bool attractive() const { return g < 0.0; }

  // Throws InputError if g is not finite or disagrees with the physical
  // inputs by more than 1e-12 relative.
  void validate() const;
};

// 1/(pi hbar) sqrt(2m/E), the 1D density of states.
double density_of_states(double energy, double mass, double hbar);

struct ScatteringCoefficients {
  double g = 0.0;
  Complex t0{1.0, 0.0};  // singlet
  Complex t1{1.0, 0.0};  // triplet
  Complex r0{0.0, 0.0};
  Complex r1{0.0, 0.0};
};

ScatteringCoefficients coefficients(const ScatteringParams& params);
ScatteringCoefficients coefficients(double g);

enum class Side {
  transmitted,  // x > 0
  reflected,    // x < 0
};

struct WavefunctionValues {
  Complex phi0;
  Complex phi1;  // includes the sqrt3 weight of the triplet sum
};

// phi_0(x), phi_1(x) of the scattering eigenstate. side must agree with the
// sign of x; x = 0 is evaluated as the transmitted-side limit. Requires k.
WavefunctionValues wavefunctions(const ScatteringParams& params, double x, Side side);

// Same values parametrised by the phase theta = 2kx at the probe point
// (kx = theta/2). On the reflected side theta is the signed phase of a point
// with x < 0, so theta = pi/2 corresponds to x = -3pi/(4k).
WavefunctionValues wavefunctions_at_phase(const ScatteringCoefficients& c, Side side, double theta);

// Reflected-side position (x < 0) whose phase 2kx equals theta mod 2pi.
double reflected_probe_position(double k, double theta);

}  // namespace kossprobe
