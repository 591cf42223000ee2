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

#include "kossprobe/kossakowski.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "kossprobe/errors.hpp"

namespace kossprobe {

namespace {

// Maps 0-based (i, j) to the position in (C11, C12, C13, C22, C23, C33).
int packed_index(int i, int j) {
  if (i > j) std::swap(i, j);
  static constexpr int kTable[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return kTable[i][j];
}

void require_hermitian(const Eigen::Ref<const ComplexMatrix>& rho, const char* who) {
  const double scale = std::max(1.0, max_abs(rho));
  if (!is_hermitian(rho, kStructuralTolerance * scale)) {
    throw InputError(std::string(who) + ": density matrix must be Hermitian");
  }
}

Mat2 apply_dissipator(const KossakowskiMatrix& c, const Mat2& rho) {
  Mat2 out = Mat2::Zero();
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const double cij = c(i - 1, j - 1);
      if (cij == 0.0) continue;
      const Mat2 si = pauli(i);
      const Mat2 sj = pauli(j);
      const Mat2 sisj = si * sj;
      out += cij * (sj * rho * si - 0.5 * (sisj * rho + rho * sisj));
    }
  }
  return out;
}

struct SortedEigen {
  Eigen::Vector3d values;   // descending
  Eigen::Matrix3d vectors;  // columns match values
};

SortedEigen sorted_eigen(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
  SortedEigen out;
  // Eigen returns ascending order.
  for (int l = 0; l < 3; ++l) {
    out.values(l) = solver.eigenvalues()(2 - l);
    Eigen::Vector3d v = solver.eigenvectors().col(2 - l);
    for (int k = 0; k < 3; ++k) {
      if (std::abs(v(k)) > 1e-14) {
        if (v(k) < 0.0) v = -v;
        break;
      }
    }
    out.vectors.col(l) = v;
  }
  return out;
}

}  // namespace

KossakowskiMatrix::KossakowskiMatrix(double c11, double c12, double c13, double c22, double c23,
                                     double c33)
    : c_{c11, c12, c13, c22, c23, c33} {}

KossakowskiMatrix KossakowskiMatrix::diagonal(double c1, double c2, double c3) {
  return {c1, 0.0, 0.0, c2, 0.0, c3};
}

KossakowskiMatrix KossakowskiMatrix::from_vector(const Vector6d& v) {
  return {v(0), v(1), v(2), v(3), v(4), v(5)};
}

KossakowskiMatrix KossakowskiMatrix::from_matrix(const Eigen::Matrix3d& m, double tol) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw InputError("Kossakowski matrix must be symmetric");
  }
  const Eigen::Matrix3d s = 0.5 * (m + m.transpose());
  return {s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2)};
}

KossakowskiMatrix KossakowskiMatrix::unit(int beta) {
  if (beta < 0 || beta > 5) throw InputError("Kossakowski unit index must be in 0..5");
  Vector6d v = Vector6d::Zero();
  v(beta) = 1.0;
  return from_vector(v);
}

double KossakowskiMatrix::operator()(int i, int j) const {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw InputError("Kossakowski index out of range");
  return c_[packed_index(i, j)];
}

Eigen::Matrix3d KossakowskiMatrix::matrix() const {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Vector6d KossakowskiMatrix::as_vector() const {
  Vector6d v;
  for (int k = 0; k < 6; ++k) v(k) = c_[k];
  return v;
}

Eigen::Vector3d KossakowskiMatrix::eigenvalues() const { return sorted_eigen(matrix()).values; }

bool CpReport::minors_satisfied() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const CpCondition& c) { return c.satisfied; });
}

CpReport KossakowskiMatrix::cp_check(double tol) const {
  const Eigen::Matrix3d m = matrix();
  CpReport report;
  report.tolerance = tol;
  report.eigenvalues = eigenvalues();
  report.min_eigenvalue = report.eigenvalues.minCoeff();
  report.psd = report.min_eigenvalue >= -tol;

  const auto minor2 = [&](int a, int b) { return m(a, a) * m(b, b) - m(a, b) * m(a, b); };
  const std::array<std::pair<const char*, double>, 7> values{{
      {"C11 >= 0", m(0, 0)},
      {"C22 >= 0", m(1, 1)},
      {"C33 >= 0", m(2, 2)},
      {"C11*C22 - C12^2 >= 0", minor2(0, 1)},
      {"C11*C33 - C13^2 >= 0", minor2(0, 2)},
      {"C22*C33 - C23^2 >= 0", minor2(1, 2)},
      {"det(C) >= 0", m.determinant()},
  }};
  for (std::size_t k = 0; k < values.size(); ++k) {
    report.conditions[k] = {values[k].first, values[k].second, values[k].second >= -tol};
  }
  return report;
}

Mat2 dissipator_spin(const KossakowskiMatrix& c, const Mat2& rho) {
  require_hermitian(rho, "dissipator_spin");
  return apply_dissipator(c, rho);
}

Mat4 dissipator_lifted(const KossakowskiMatrix& c, const Mat4& rho) {
  require_hermitian(rho, "dissipator_lifted");
  // Electron indices select 2x2 impurity blocks; the dissipator acts blockwise.
  Mat4 out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out.block<2, 2>(2 * a, 2 * b) = apply_dissipator(c, rho.block<2, 2>(2 * a, 2 * b));
    }
  }
  return out;
}

Mat2 noise_term(const KossakowskiMatrix& c, const Mat2& rho) {
  Mat2 out = Mat2::Zero();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out += c(i - 1, j - 1) * pauli(j) * rho * pauli(i);
  return out;
}

DTildeMatrix d_tilde(const KossakowskiMatrix& c) {
  return d_tilde(Eigen::Matrix3cd(c.matrix().cast<Complex>()));
}

DTildeMatrix d_tilde(const Eigen::Matrix3cd& c) {
  // <psi3| (1 (x) sigma_j) |phi_b> is (1, 0, 0) for phi0 and
  // (0, -i/sqrt3, sqrt(2/3)) for phi1.
  const double s3 = std::sqrt(3.0);
  const double s2 = std::sqrt(2.0);
  DTildeMatrix d;
  d(0, 0) = c(0, 0);
  d(0, 1) = (-kI * c(0, 1) + s2 * c(0, 2)) / s3;
  d(1, 0) = (kI * c(1, 0) + s2 * c(2, 0)) / s3;
  d(1, 1) = (c(1, 1) + 2.0 * c(2, 2) + kI * s2 * (c(1, 2) - c(2, 1))) / 3.0;
  return d;
}

DTildeMatrix d_tilde_tabulated(const Eigen::Matrix3cd& c) {
  const double s3 = std::sqrt(3.0);
  DTildeMatrix d;
  d(0, 0) = c(0, 0);
  d(0, 1) = (-kI * c(1, 0) + c(2, 0)) / s3;
  d(1, 0) = (kI * c(0, 1) + c(0, 2)) / s3;
  d(1, 1) = (c(1, 1) + 2.0 * c(2, 2) + 2.0 * std::sqrt(2.0) * c(1, 2).imag()) / 3.0;
  return d;
}

std::vector<Mat2> kraus_noise(const KossakowskiMatrix& c, double tol) {
  const SortedEigen eig = sorted_eigen(c.matrix());
  const double lowest = eig.values.minCoeff();
  if (lowest < -tol) {
    std::ostringstream msg;
    msg << "Kossakowski matrix is not positive semidefinite (eigenvalue " << lowest
        << "); the map is not completely positive and has no Kraus form";
    throw NotCompletelyPositive(msg.str(), lowest);
  }
  std::vector<Mat2> ops;
  for (int l = 0; l < 3; ++l) {
    const double weight = eig.values(l);
    if (weight <= 0.0) continue;
    Mat2 w = Mat2::Zero();
    for (int j = 0; j < 3; ++j) w += eig.vectors(j, l) * pauli(j + 1);
    ops.push_back(std::sqrt(weight) * w);
  }
  return ops;
}

double BlochState::norm() const { return std::sqrt(r1 * r1 + r2 * r2 + r3 * r3); }

Mat2 BlochState::density() const {
  return 0.5 * (Mat2::Identity() + r1 * pauli(1) + r2 * pauli(2) + r3 * pauli(3));
}

BlochState BlochState::from_density(const Mat2& rho) {
  return {(rho * pauli(1)).trace().real(), (rho * pauli(2)).trace().real(),
          (rho * pauli(3)).trace().real()};
}

BlochState bloch_evolve(const KossakowskiMatrix& c, const BlochState& r, double t) {
  if (!c.is_diagonal()) {
    throw InputError("bloch_evolve: only diagonal Kossakowski matrices are supported");
  }
  if (!(t >= 0.0)) throw InputError("bloch_evolve: time must be non-negative");
  const double total = c(0, 0) + c(1, 1) + c(2, 2);
  const auto factor = [&](int k) { return std::exp(-2.0 * (total - c(k, k)) * t); };
  return {r.r1 * factor(0), r.r2 * factor(1), r.r3 * factor(2)};
}

}  // namespace kossprobe
