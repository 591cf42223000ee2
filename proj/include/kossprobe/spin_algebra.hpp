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

// Fixed-size complex linear algebra for one and two spin-1/2 systems.
//
// Conventions used throughout the library:
//  * Two-qubit states are electron (x) impurity; |ab> has index 2a + b.
//  * Bell basis order: psi0 = (|00>+|11>)/sqrt2, psi1 = (|01>+|10>)/sqrt2,
//    psi2 = (|01>-|10>)/sqrt2, psi3 = (|00>-|11>)/sqrt2.
//  * Superoperators act on column-stacked density matrices:
//    vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace kossprobe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using Mat16 = Eigen::Matrix<Complex, 16, 16>;
using Vec16 = Eigen::Matrix<Complex, 16, 1>;

inline constexpr double kStructuralTolerance = 1e-12;
inline constexpr Complex kI{0.0, 1.0};

bool is_hermitian(const Eigen::Ref<const ComplexMatrix>& a, double tol = kStructuralTolerance);
bool is_unitary(const Eigen::Ref<const ComplexMatrix>& a, double tol = kStructuralTolerance);
// Smallest eigenvalue of the Hermitian part (A + A^dag)/2.
double min_eigenvalue(const Eigen::Ref<const ComplexMatrix>& a);
bool is_psd(const Eigen::Ref<const ComplexMatrix>& a, double tol = kStructuralTolerance);
double max_abs(const Eigen::Ref<const ComplexMatrix>& a);

// Pauli matrix sigma_index, index in {1, 2, 3}. Throws InputError otherwise.
Mat2 pauli(int index);

// (1 - i sigma_kind) / sqrt2, kind in {1, 2}.
Mat2 rotation(int kind);

// Real 3x3 matrix O with u^dag sigma_i u = sum_j O_ij sigma_j (1-based Pauli
// indices mapped to 0-based rows/columns). u must be unitary.
Eigen::Matrix3d conjugation_action(const Mat2& u);

template <class A, class B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  static_assert(A::RowsAtCompileTime > 0 && B::RowsAtCompileTime > 0 &&
                    A::ColsAtCompileTime > 0 && B::ColsAtCompileTime > 0,
                "kron is defined for fixed-size operands only");
  constexpr int kRows = int{A::RowsAtCompileTime} * int{B::RowsAtCompileTime};
  constexpr int kCols = int{A::ColsAtCompileTime} * int{B::ColsAtCompileTime};
  Eigen::Matrix<Complex, kRows, kCols> out;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Complex(a(i, j)) * b.template cast<Complex>();
    }
  }
  return out;
}

// |ab> in the computational basis, a = electron bit, b = impurity bit.
Vec4 computational(int electron, int impurity);

enum class BasisLabel { canonical, rot1, rot2 };

std::string_view to_string(BasisLabel label);
BasisLabel basis_from_string(std::string_view name);

struct SpinBasis {
  BasisLabel label = BasisLabel::canonical;
  std::array<Vec4, 4> vectors;

  // The state the detector projects onto (psi3 rotated into this basis).
  const Vec4& probe() const { return vectors[3]; }
};

// canonical: Bell basis; rot1/rot2: (1 (x) R^(k)) applied to each Bell vector.
SpinBasis basis(BasisLabel label);

inline constexpr std::array<BasisLabel, 3> kAllBases{BasisLabel::canonical, BasisLabel::rot1,
                                                     BasisLabel::rot2};

// Spin content of a scattering eigenstate: singlet channel and the
// normalised sum of the three triplet states.
struct SpinStatePair {
  Vec4 phi0;
  Vec4 phi1;
};

// Built from the total-spin states |S_1>..|S_4>.
SpinStatePair spin_states();
// Built from a basis via phi0 = v2, phi1 = (v1 + sqrt2 v0)/sqrt3; for the
// canonical basis this coincides with spin_states().
SpinStatePair spin_states(const SpinBasis& b);

template <int N>
Eigen::Matrix<Complex, N * N, 1> vec(const Eigen::Matrix<Complex, N, N>& m) {
  static_assert(!Eigen::Matrix<Complex, N, N>::IsRowMajor, "column stacking needs column-major storage");
  return Eigen::Map<const Eigen::Matrix<Complex, N * N, 1>>(m.data());
}

template <int N>
Eigen::Matrix<Complex, N, N> unvec(const Eigen::Matrix<Complex, N * N, 1>& v) {
  return Eigen::Map<const Eigen::Matrix<Complex, N, N>>(v.data());
}

// Matrix L with vec(map(rho)) = L vec(rho), assembled column by column from
// the images of the matrix units. map must be linear.
template <int N, class Map>
Eigen::Matrix<Complex, N * N, N * N> vectorize_superop(Map&& map) {
  Eigen::Matrix<Complex, N * N, N * N> out;
  for (int col = 0; col < N; ++col) {
    for (int row = 0; row < N; ++row) {
      Eigen::Matrix<Complex, N, N> unit = Eigen::Matrix<Complex, N, N>::Zero();
      unit(row, col) = 1.0;
      const Eigen::Matrix<Complex, N, N> image = map(unit);
      out.col(row + N * col) = vec<N>(image);
    }
  }
  return out;
}

}  // namespace kossprobe
