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

#include "kossprobe/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "kossprobe/errors.hpp"

namespace kossprobe::oracle {

namespace {

// vec(A X B) = (B^T (x) A) vec(X)
ComplexMatrix sandwich(const ComplexMatrix& left, const ComplexMatrix& right) {
  const auto n = left.rows();
  ComplexMatrix out(n * n, n * n);
  const ComplexMatrix rt = right.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.block(i * n, j * n, n, n) = rt(i, j) * left;
  return out;
}

ComplexMatrix spin_operator(int index, bool lifted) {
  const Mat2 s = pauli(index);
  if (!lifted) return s;
  return kron(Mat2::Identity(), s);
}

Vec4 eigen_spin_vector(const ScatteringCoefficients& coeffs, const SpinBasis& b, Side side,
                       double theta) {
  const double kx = 0.5 * theta;
  const Complex in = std::exp(kI * kx);
  const Complex out = std::exp(-kI * kx);
  Complex a0, a1;
  if (side == Side::transmitted) {
    a0 = coeffs.t0 * in;
    a1 = coeffs.t1 * in;
  } else {
    a0 = in + coeffs.r0 * out;
    a1 = in + coeffs.r1 * out;
  }
  // phi1(x) |phi1_spin> = sqrt3 a1 (v1 + sqrt2 v0) / sqrt3
  const Vec4 singlet = b.vectors[2];
  const Vec4 triplet_sum = b.vectors[1] + std::sqrt(2.0) * b.vectors[0];
  return a0 * singlet + a1 * triplet_sum;
}

}  // namespace

ComplexMatrix SuperOperator::apply(const ComplexMatrix& rho) const {
  const int n = dimension();
  if (rho.rows() != n || rho.cols() != n) throw InputError("SuperOperator: dimension mismatch");
  const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), n * n);
  const Eigen::VectorXcd image = matrix * v;
  return Eigen::Map<const ComplexMatrix>(image.data(), n, n);
}

SuperOperator build_superop(const Eigen::Matrix3cd& c, bool lifted) {
  const int n = lifted ? 4 : 2;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  SuperOperator out{ComplexMatrix::Zero(n * n, n * n), lifted};
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const Complex cij = c(i - 1, j - 1);
      if (cij == 0.0) continue;
      const ComplexMatrix si = spin_operator(i, lifted);
      const ComplexMatrix sj = spin_operator(j, lifted);
      const ComplexMatrix sisj = si * sj;
      out.matrix += cij * (sandwich(sj, si) - 0.5 * sandwich(sisj, id) - 0.5 * sandwich(id, sisj));
    }
  }
  return out;
}

SuperOperator build_superop(const Eigen::Matrix3d& c, bool lifted) {
  return build_superop(Eigen::Matrix3cd(c.cast<Complex>()), lifted);
}

Eigen::Matrix2cd d_tilde_bruteforce(const Eigen::Matrix3cd& c, BasisLabel basis_label) {
  const SuperOperator l = build_superop(c, true);
  const SpinBasis b = basis(basis_label);
  const Vec4 q = b.probe();
  const std::array<Vec4, 2> phi{b.vectors[2],
                                (b.vectors[1] + std::sqrt(2.0) * b.vectors[0]) / std::sqrt(3.0)};
  Eigen::Matrix2cd d;
  for (int a = 0; a < 2; ++a) {
    for (int bb = 0; bb < 2; ++bb) {
      const ComplexMatrix x = phi[bb] * phi[a].adjoint();
      d(a, bb) = (q.adjoint() * l.apply(x) * q)(0, 0);
    }
  }
  return d;
}

RatePair rates_bruteforce(const Eigen::Matrix3d& c, const ScatteringCoefficients& coeffs,
                          BasisLabel basis_label, double theta) {
  const SuperOperator l = build_superop(c, true);
  const SpinBasis b = basis(basis_label);
  const Vec4 q = b.probe();
  const auto rate = [&](Side side) {
    const Vec4 v = eigen_spin_vector(coeffs, b, side, theta);
    const ComplexMatrix rho = v * v.adjoint();
    return (q.adjoint() * l.apply(rho) * q)(0, 0).real();
  };
  return {rate(Side::transmitted), rate(Side::reflected)};
}

ComplexMatrix propagator(const ComplexMatrix& generator, double t) {
  if (!(t >= 0.0)) throw InputError("propagator: time must be non-negative");
  const ComplexMatrix full = (generator * Complex(t)).exp();
  const ComplexMatrix half = (generator * Complex(0.5 * t)).exp();
  const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
  if ((full - half * half).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::runtime_error("propagator: matrix exponential failed step-doubling validation");
  }
  return full;
}

Eigen::Matrix2cd exact_qubit_evolution(const Eigen::Matrix3d& c, const Eigen::Matrix2cd& rho0,
                                       double t) {
  const SuperOperator l = build_superop(c, false);
  SuperOperator step{propagator(l.matrix, t), false};
  return step.apply(rho0);
}

Eigen::Matrix4cd exact_lifted_evolution(const Eigen::Matrix3d& c, const Eigen::Matrix4cd& rho0,
                                        double t) {
  const SuperOperator l = build_superop(c, true);
  SuperOperator step{propagator(l.matrix, t), true};
  return step.apply(rho0);
}

}  // namespace kossprobe::oracle
