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

#include "kossprobe/inversion.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "kossprobe/errors.hpp"

namespace kossprobe {

namespace {

void require_conditioned(const ProbeMatrix& m, double max_condition) {
  if (!(m.condition_number <= max_condition)) {
    std::ostringstream msg;
    msg << "probe matrix is singular or ill-conditioned (det = " << m.det
        << ", condition number = " << m.condition_number << ", limit = " << max_condition
        << "); the coupling may be too small or the probe degenerate";
    throw NumericalRefusal(msg.str(), m.det, m.condition_number);
  }
}

// Symmetric square root of a PSD covariance matrix.
Matrix6d covariance_root(const Matrix6d& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix6d> solver(0.5 * (cov + cov.transpose()));
  const Vector6d roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

KossakowskiMatrix invert_exact(const Vector6d& rates, const ProbeMatrix& m, double max_condition) {
  require_conditioned(m, max_condition);
  return KossakowskiMatrix::from_vector(m.m.partialPivLu().solve(rates));
}

KossakowskiMatrix invert_exact(const ProbeResult& rates, const ProbeMatrix& m,
                               double max_condition) {
  return invert_exact(rates.rates, m, max_condition);
}

std::string_view to_string(CpVerdict v) {
  switch (v) {
    case CpVerdict::cp:
      return "CP";
    case CpVerdict::not_cp:
      return "not-CP";
    case CpVerdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

InversionResult invert_noisy(const Vector6d& rates, const Vector6d& sigmas, const ProbeMatrix& m,
                             const InversionOptions& options) {
  for (int k = 0; k < 6; ++k) {
    if (!std::isfinite(rates(k))) throw InputError("invert_noisy: rates must be finite");
    if (!(sigmas(k) >= 0.0) || !std::isfinite(sigmas(k))) {
      throw InputError("invert_noisy: uncertainties must be finite and non-negative");
    }
  }
  if (options.bootstrap_samples < 2) {
    throw InputError("invert_noisy: at least two bootstrap samples are required");
  }
  require_conditioned(m, options.max_condition);

  const auto lu = m.m.partialPivLu();
  const Vector6d c = lu.solve(rates);
  const Matrix6d m_inv = lu.inverse();

  InversionResult out;
  out.c_hat = KossakowskiMatrix::from_vector(c);
  out.covariance = m_inv * sigmas.cwiseAbs2().asDiagonal() * m_inv.transpose();
  out.residual_norm = (m.m * c - rates).norm();
  out.condition_number = m.condition_number;
  out.diagnostics = out.c_hat.cp_check();
  out.margin = out.diagnostics.min_eigenvalue;

  const Matrix6d root = covariance_root(out.covariance);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < options.bootstrap_samples; ++s) {
    Vector6d z;
    for (int k = 0; k < 6; ++k) z(k) = normal(rng);
    const double lambda = KossakowskiMatrix::from_vector(c + root * z).eigenvalues().minCoeff();
    sum += lambda;
    sum_sq += lambda * lambda;
  }
  const double n = options.bootstrap_samples;
  const double mean = sum / n;
  out.margin_sigma = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)));

  if (out.margin >= 0.0) {
    out.verdict = CpVerdict::cp;
  } else if (out.margin <= -options.z * out.margin_sigma) {
    out.verdict = CpVerdict::not_cp;
  } else {
    out.verdict = CpVerdict::indeterminate;
  }
  return out;
}

KossakowskiMatrix psd_project(const KossakowskiMatrix& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(c.matrix());
  if (solver.eigenvalues().minCoeff() >= 0.0) return c;
  const Eigen::Vector3d clipped = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix3d p =
      solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
  return KossakowskiMatrix::from_matrix(0.5 * (p + p.transpose()), 1e-9);
}

}  // namespace kossprobe
