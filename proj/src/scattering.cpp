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

#include "kossprobe/scattering.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kossprobe/errors.hpp"

namespace kossprobe {

namespace {

Complex transmission(double alpha) { return 1.0 / (1.0 + kI * alpha); }

WavefunctionValues evaluate(const ScatteringCoefficients& c, Side side, double kx) {
  const Complex forward = std::exp(kI * kx);
  const double sqrt3 = std::sqrt(3.0);
  if (side == Side::transmitted) {
    return {c.t0 * forward, sqrt3 * c.t1 * forward};
  }
  const Complex backward = std::exp(-kI * kx);
  return {forward + c.r0 * backward, sqrt3 * (forward + c.r1 * backward)};
}

}  // namespace

ScatteringParams ScatteringParams::dimensionless(double g, std::optional<double> k) {
  ScatteringParams p;
  p.g = g;
  p.k = k;
  p.validate();
  return p;
}

double density_of_states(double energy, double mass, double hbar) {
  if (!(energy > 0.0)) {
    throw InputError("scattering: only positive energies are supported, got E = " +
                     std::to_string(energy));
  }
  if (!(mass > 0.0) || !(hbar > 0.0)) {
    throw InputError("scattering: mass and hbar must be positive");
  }
  return std::sqrt(2.0 * mass / energy) / (std::numbers::pi * hbar);
}

ScatteringParams ScatteringParams::from_physical(const PhysicalInputs& in) {
  const double rho = density_of_states(in.energy, in.mass, in.hbar);
  ScatteringParams p;
  p.g = std::numbers::pi * in.coupling_j * rho / 4.0;
  p.k = std::sqrt(2.0 * in.mass * in.energy) / in.hbar;
  p.physical = in;
  p.validate();
  return p;
}

void ScatteringParams::validate() const {
  if (!std::isfinite(g)) throw InputError("scattering: coupling g must be finite");
  if (k && !(*k > 0.0 && std::isfinite(*k))) {
    throw InputError("scattering: wavenumber k must be positive and finite");
  }
  if (physical) {
    const double rho = density_of_states(physical->energy, physical->mass, physical->hbar);
    const double expected = std::numbers::pi * physical->coupling_j * rho / 4.0;
    if (std::abs(expected - g) > 1e-12 * std::max(1.0, std::abs(expected))) {
      throw InputError("scattering: g is inconsistent with the physical inputs");
    }
  }
}

ScatteringCoefficients coefficients(double g) {
  if (!std::isfinite(g)) throw InputError("scattering: coupling g must be finite");
  ScatteringCoefficients c;
  c.g = g;
  c.t0 = transmission(-1.5 * g);
  c.t1 = transmission(0.5 * g);
  c.r0 = c.t0 - 1.0;
  c.r1 = c.t1 - 1.0;
  return c;
}

ScatteringCoefficients coefficients(const ScatteringParams& params) {
  params.validate();
  return coefficients(params.g);
}

WavefunctionValues wavefunctions(const ScatteringParams& params, double x, Side side) {
  if (!params.k) throw InputError("wavefunctions: wavenumber k is required");
  if (!std::isfinite(x)) throw InputError("wavefunctions: position must be finite");
  if (x > 0.0 && side == Side::reflected) {
    throw InputError("wavefunctions: x > 0 lies on the transmitted side");
  }
  if (x < 0.0 && side == Side::transmitted) {
    throw InputError("wavefunctions: x < 0 lies on the reflected side");
  }
  const Side effective = x < 0.0 ? Side::reflected : Side::transmitted;
  return evaluate(coefficients(params), effective, *params.k * x);
}

WavefunctionValues wavefunctions_at_phase(const ScatteringCoefficients& c, Side side, double theta) {
  return evaluate(c, side, 0.5 * theta);
}

double reflected_probe_position(double k, double theta) {
  if (!(k > 0.0)) throw InputError("reflected_probe_position: k must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  double reduced = std::fmod(theta, two_pi);
  if (reduced < 0.0) reduced += two_pi;  // [0, 2pi), so the result is strictly negative
  return (reduced - two_pi) / (2.0 * k);
}

}  // namespace kossprobe
