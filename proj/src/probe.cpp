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

#include "kossprobe/probe.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace kossprobe {

namespace {

Eigen::Matrix3d basis_rotation(BasisLabel basis) {
  switch (basis) {
    case BasisLabel::canonical:
      return Eigen::Matrix3d::Identity();
    case BasisLabel::rot1:
      return conjugation_action(rotation(1));
    case BasisLabel::rot2:
      return conjugation_action(rotation(2));
  }
  return Eigen::Matrix3d::Identity();
}

}  // namespace

bool is_canonical_phase(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double reduced = std::fmod(theta - kQuarterWavePhase, two_pi);
  if (reduced < 0.0) reduced += two_pi;
  return std::min(reduced, two_pi - reduced) < 1e-12;
}

KossakowskiMatrix rotate_for_basis(const KossakowskiMatrix& c, BasisLabel basis) {
  if (basis == BasisLabel::canonical) return c;
  const Eigen::Matrix3d o = basis_rotation(basis);
  const Eigen::Matrix3d m = c.matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return KossakowskiMatrix::from_matrix(o.transpose() * m * o, 1e-12 * scale);
}

double probability_rate(const KossakowskiMatrix& c, const ScatteringCoefficients& coeffs,
                        BasisLabel basis, Side side, double theta) {
  const DTildeMatrix d = d_tilde(rotate_for_basis(c, basis));
  const WavefunctionValues w = wavefunctions_at_phase(coeffs, side, theta);
  const Eigen::Vector2cd phi(w.phi0, w.phi1);
  return (phi.adjoint() * d * phi)(0, 0).real();
}

ProbeResult forward(const KossakowskiMatrix& c, const ScatteringCoefficients& coeffs,
                    double theta) {
  ProbeResult out;
  out.g = coeffs.g;
  out.phase = theta;
  out.canonical_phase = is_canonical_phase(theta);
  for (int a = 0; a < 3; ++a) {
    out.rates(a) = probability_rate(c, coeffs, kAllBases[a], Side::transmitted, theta);
    out.rates(3 + a) = probability_rate(c, coeffs, kAllBases[a], Side::reflected, theta);
  }
  return out;
}

std::string_view to_string(MatrixSource source) {
  return source == MatrixSource::programmatic ? "programmatic" : "appendix";
}

void analyse(ProbeMatrix& pm) {
  pm.det = pm.m.partialPivLu().determinant();
  Eigen::JacobiSVD<Matrix6d> svd(pm.m);
  const auto& s = svd.singularValues();
  pm.condition_number =
      s(5) > 0.0 ? s(0) / s(5) : std::numeric_limits<double>::infinity();
}

ProbeMatrix build_matrix_programmatic(const ScatteringCoefficients& coeffs, double theta) {
  ProbeMatrix pm;
  pm.source = MatrixSource::programmatic;
  pm.g = coeffs.g;
  pm.phase = theta;
  for (int beta = 0; beta < 6; ++beta) {
    pm.m.col(beta) = forward(KossakowskiMatrix::unit(beta), coeffs, theta).rates;
  }
  analyse(pm);
  return pm;
}

AppendixCoefficients appendix_coefficients(const ScatteringCoefficients& coeffs) {
  const double re0 = coeffs.t0.real(), im0 = coeffs.t0.imag();
  const double re1 = coeffs.t1.real(), im1 = coeffs.t1.imag();
  AppendixCoefficients k{};
  k.a0 = std::norm(coeffs.t0);
  k.a1 = std::norm(coeffs.t1);
  k.b = 2.0 * (-im0 * re1 + im1 * re0);
  k.c = 2.0 * (re0 * re1 + im1 * im0);
  k.d0 = 2.0 - std::norm(coeffs.t0) + 2.0 * im0;
  k.d1 = 2.0 - std::norm(coeffs.t1) + 2.0 * im1;
  k.e = 2.0 * (im0 * re1 + im1 * re0 + re0 - re1 + im0 - im1);
  k.f = 2.0 * (2.0 + re0 * re1 + im1 * im0 - re0 - re1 + im0 + im1);
  return k;
}

ProbeMatrix build_matrix_appendix(const ScatteringCoefficients& coeffs) {
  const AppendixCoefficients k = appendix_coefficients(coeffs);
  ProbeMatrix pm;
  pm.source = MatrixSource::appendix;
  pm.g = coeffs.g;
  pm.phase = kQuarterWavePhase;
  // clang-format off
  pm.m << k.a0,     k.b,  k.c,  k.a1,       0.0, 2.0 * k.a1,
          k.a0,    -k.c,  k.b,  2.0 * k.a1, 0.0, k.a1,
          2.0 * k.a1, 0.0, -k.c, k.a1,      k.b, k.a0,
          k.d0,     k.e,  k.f,  k.d1,       0.0, 2.0 * k.d1,
          k.d0,    -k.f,  k.e,  2.0 * k.d1, 0.0, k.d1,
          2.0 * k.d1, 0.0, -k.f, k.d1,      k.e, k.d0;
  // clang-format on
  analyse(pm);
  return pm;
}

MatrixDeviation compare(const ProbeMatrix& reference, const ProbeMatrix& candidate, double tol) {
  MatrixDeviation dev;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double diff = std::abs(candidate.m(i, j) - reference.m(i, j));
      dev.max_abs = std::max(dev.max_abs, diff);
      if (diff > tol) dev.entries.push_back({i, j, reference.m(i, j), candidate.m(i, j)});
    }
  }
  return dev;
}

}  // namespace kossprobe
