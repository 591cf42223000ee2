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

// Kossakowski matrix of a qubit dissipator, its complete-positivity
// diagnostics, and the closed-form quantities derived from it.
//
// The dissipator acting on the impurity spin is
//   L[rho] = sum_ij C_ij (sigma_j rho sigma_i - 1/2 {sigma_i sigma_j, rho}),
// and the semigroup it generates is completely positive iff C >= 0.

#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kossprobe/spin_algebra.hpp"

namespace kossprobe {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Eigenvalue-based PSD verdict threshold.
inline constexpr double kCpTolerance = 1e-10;

struct CpCondition {
  std::string name;
  double margin = 0.0;  // value of the minor; satisfied iff margin >= -tol
  bool satisfied = false;
};

struct CpReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();  // descending
  double tolerance = kCpTolerance;
  // C11, C22, C33, the three 2x2 principal minors, det C.
  std::array<CpCondition, 7> conditions;

  bool minors_satisfied() const;
};

// Real symmetric 3x3 matrix stored as its six independent entries in the
// order (C11, C12, C13, C22, C23, C33). Off-diagonal entries set both mirror
// positions.
class KossakowskiMatrix {
 public:
  KossakowskiMatrix() = default;
  KossakowskiMatrix(double c11, double c12, double c13, double c22, double c23, double c33);

  static KossakowskiMatrix zero() { return {}; }
  static KossakowskiMatrix identity() { return diagonal(1.0, 1.0, 1.0); }
  static KossakowskiMatrix diagonal(double c1, double c2, double c3);
  static KossakowskiMatrix from_vector(const Vector6d& v);
  // Throws InputError unless m is symmetric within tol.
  static KossakowskiMatrix from_matrix(const Eigen::Matrix3d& m, double tol = kStructuralTolerance);
  // The beta-th unit of the six-parameter vector (beta in 0..5).
  static KossakowskiMatrix unit(int beta);

  // 0-based indices.
  double operator()(int i, int j) const;
  Eigen::Matrix3d matrix() const;
  Vector6d as_vector() const;
  bool is_diagonal() const { return c_[1] == 0.0 && c_[2] == 0.0 && c_[4] == 0.0; }

  Eigen::Vector3d eigenvalues() const;  // descending
  CpReport cp_check(double tol = kCpTolerance) const;

  friend bool operator==(const KossakowskiMatrix&, const KossakowskiMatrix&) = default;

 private:
  std::array<double, 6> c_{};
};

inline constexpr std::array<const char*, 6> kParameterNames{"c11", "c12", "c13",
                                                            "c22", "c23", "c33"};

// Single-qubit dissipator. rho must be Hermitian; the result is traceless.
Mat2 dissipator_spin(const KossakowskiMatrix& c, const Mat2& rho);
// 1 (x) L on electron (x) impurity. rho must be Hermitian.
Mat4 dissipator_lifted(const KossakowskiMatrix& c, const Mat4& rho);
// The jump part sum_ij C_ij sigma_j rho sigma_i alone.
Mat2 noise_term(const KossakowskiMatrix& c, const Mat2& rho);

// 2x2 compression of the lifted dissipator between the eigenstate spin
// components, probed along psi3:
//   D(a,b) = <psi3| L[|phi_b><phi_a|] |psi3>.
using DTildeMatrix = Eigen::Matrix2cd;

// Closed form, verified against the brute-force superoperator:
//   D = [[ C11,                        (-i C12 + sqrt2 C13)/sqrt3       ],
//        [ (i C21 + sqrt2 C31)/sqrt3,  (C22 + 2 C33 - 2 sqrt2 Im C23)/3 ]]
DTildeMatrix d_tilde(const KossakowskiMatrix& c);
// Same for a Hermitian (complex) C.
DTildeMatrix d_tilde(const Eigen::Matrix3cd& c);
// The tabulated variant with 1/sqrt3 on the C31 term and +2 sqrt2 Im C23.
// Kept only so adjudication reports can quantify how far it is off.
DTildeMatrix d_tilde_tabulated(const Eigen::Matrix3cd& c);

// Kraus operators W_l = sqrt(c_l) sum_j conj(v_l^(j)) sigma_j of the noise
// term, one per strictly positive eigenvalue, ordered by descending
// eigenvalue. Eigenvectors are sign-fixed so their first nonzero component is
// positive. Throws NotCompletelyPositive carrying the most negative eigenvalue
// when C has an eigenvalue below -tol.
std::vector<Mat2> kraus_noise(const KossakowskiMatrix& c, double tol = kCpTolerance);

struct BlochState {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;

  double norm() const;
  Mat2 density() const;  // (1 + r.sigma)/2
  static BlochState from_density(const Mat2& rho);
};

// Exact semigroup action for a diagonal C: component k decays with rate
// 2 (c1 + c2 + c3 - c_k). Non-diagonal C and t < 0 raise InputError.
BlochState bloch_evolve(const KossakowskiMatrix& c, const BlochState& r, double t);

}  // namespace kossprobe
