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

#include "kossprobe/spin_algebra.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "kossprobe/errors.hpp"

namespace kossprobe {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

bool is_hermitian(const Eigen::Ref<const ComplexMatrix>& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const Eigen::Ref<const ComplexMatrix>& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
  return max_abs(a.adjoint() * a - id) <= tol;
}

double min_eigenvalue(const Eigen::Ref<const ComplexMatrix>& a) {
  if (a.rows() != a.cols()) throw InputError("min_eigenvalue: matrix is not square");
  const ComplexMatrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::Ref<const ComplexMatrix>& a, double tol) {
  return is_hermitian(a, tol) && min_eigenvalue(a) >= -tol;
}

double max_abs(const Eigen::Ref<const ComplexMatrix>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

Mat2 pauli(int index) {
  Mat2 s;
  switch (index) {
    case 1:
      s << 0.0, 1.0, 1.0, 0.0;
      return s;
    case 2:
      s << 0.0, -kI, kI, 0.0;
      return s;
    case 3:
      s << 1.0, 0.0, 0.0, -1.0;
      return s;
    default:
      throw InputError("pauli: index must be 1, 2 or 3, got " + std::to_string(index));
  }
}

Mat2 rotation(int kind) {
  if (kind != 1 && kind != 2) {
    throw InputError("rotation: kind must be 1 or 2, got " + std::to_string(kind));
  }
  return (Mat2::Identity() - kI * pauli(kind)) * kInvSqrt2;
}

Eigen::Matrix3d conjugation_action(const Mat2& u) {
  Eigen::Matrix3d o;
  for (int i = 1; i <= 3; ++i) {
    const Mat2 image = u.adjoint() * pauli(i) * u;
    for (int j = 1; j <= 3; ++j) {
      // tr(sigma_j sigma_k) = 2 delta_jk
      o(i - 1, j - 1) = 0.5 * (image * pauli(j)).trace().real();
    }
  }
  return o;
}

Vec4 computational(int electron, int impurity) {
  if ((electron != 0 && electron != 1) || (impurity != 0 && impurity != 1)) {
    throw InputError("computational: qubit values must be 0 or 1");
  }
  Vec4 v = Vec4::Zero();
  v(2 * electron + impurity) = 1.0;
  return v;
}

std::string_view to_string(BasisLabel label) {
  switch (label) {
    case BasisLabel::canonical:
      return "canonical";
    case BasisLabel::rot1:
      return "rot1";
    case BasisLabel::rot2:
      return "rot2";
  }
  return "unknown";
}

BasisLabel basis_from_string(std::string_view name) {
  if (name == "canonical") return BasisLabel::canonical;
  if (name == "rot1") return BasisLabel::rot1;
  if (name == "rot2") return BasisLabel::rot2;
  throw InputError("unknown spin basis '" + std::string(name) + "'");
}

SpinBasis basis(BasisLabel label) {
  const Vec4 s00 = computational(0, 0);
  const Vec4 s01 = computational(0, 1);
  const Vec4 s10 = computational(1, 0);
  const Vec4 s11 = computational(1, 1);

  SpinBasis out;
  out.label = label;
  out.vectors = {(s00 + s11) * kInvSqrt2, (s01 + s10) * kInvSqrt2, (s01 - s10) * kInvSqrt2,
                 (s00 - s11) * kInvSqrt2};
  if (label == BasisLabel::canonical) return out;

  const Mat4 lift = kron(Mat2::Identity(), rotation(label == BasisLabel::rot1 ? 1 : 2));
  for (auto& v : out.vectors) v = lift * v;
  return out;
}

SpinStatePair spin_states() {
  const Vec4 s1 = (computational(0, 1) - computational(1, 0)) * kInvSqrt2;
  const Vec4 s2 = computational(0, 0);
  const Vec4 s3 = (computational(0, 1) + computational(1, 0)) * kInvSqrt2;
  const Vec4 s4 = computational(1, 1);
  return {s1, (s2 + s3 + s4) / std::sqrt(3.0)};
}

SpinStatePair spin_states(const SpinBasis& b) {
  return {b.vectors[2], (b.vectors[1] + std::sqrt(2.0) * b.vectors[0]) / std::sqrt(3.0)};
}

}  // namespace kossprobe
