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

// Brute-force reference computations. Nothing here calls the closed forms in
// kossakowski.hpp or probe.hpp: superoperators are assembled term by term
// from Pauli matrices and every probe quantity is evaluated from its
// definition as an expectation value.

#pragma once

#include <Eigen/Dense>

#include "kossprobe/scattering.hpp"
#include "kossprobe/spin_algebra.hpp"

namespace kossprobe::oracle {

// Superoperator of the qubit dissipator, column-stacking convention.
// lifted = false: 4x4 on the impurity alone; lifted = true: 16x16 for
// 1 (x) L on electron (x) impurity. C may be any complex 3x3 matrix.
struct SuperOperator {
  ComplexMatrix matrix;
  bool lifted = false;

  int dimension() const { return lifted ? 4 : 2; }
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

SuperOperator build_superop(const Eigen::Matrix3cd& c, bool lifted);
SuperOperator build_superop(const Eigen::Matrix3d& c, bool lifted);

// D(a, b) = <q| L[|phi_b><phi_a|] |q> with (phi0, phi1, q) taken from the
// given basis.
Eigen::Matrix2cd d_tilde_bruteforce(const Eigen::Matrix3cd& c,
                                    BasisLabel basis = BasisLabel::canonical);

struct RatePair {
  double transmitted = 0.0;
  double reflected = 0.0;
};

// <x0; q| L[|E><E|] |x0; q> on each side of the impurity, with the spin part
// of <x0|E> = phi0(x0) |phi0_spin> + phi1(x0) |phi1_spin>.
RatePair rates_bruteforce(const Eigen::Matrix3d& c, const ScatteringCoefficients& coeffs,
                          BasisLabel basis, double theta);

// exp(t L) applied to rho; validated by step doubling (exp(tL) against
// exp(tL/2)^2) to 1e-10 relative, otherwise std::runtime_error.
Eigen::Matrix2cd exact_qubit_evolution(const Eigen::Matrix3d& c, const Eigen::Matrix2cd& rho0,
                                       double t);
Eigen::Matrix4cd exact_lifted_evolution(const Eigen::Matrix3d& c, const Eigen::Matrix4cd& rho0,
                                        double t);

// exp(t L) of an arbitrary superoperator matrix, step-doubling validated.
ComplexMatrix propagator(const ComplexMatrix& generator, double t);

}  // namespace kossprobe::oracle
