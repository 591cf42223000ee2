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

#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "kossprobe/errors.hpp"
#include "kossprobe/kossakowski.hpp"
#include "kossprobe/oracle.hpp"

using namespace kossprobe;

TEST_CASE("storage, accessors and units") {
  const KossakowskiMatrix c(1, 2, 3, 4, 5, 6);
  CHECK(c(0, 1) == 2);
  CHECK(c(1, 0) == 2);
  CHECK(c(2, 1) == 5);
  CHECK(c.matrix() == c.matrix().transpose());
  CHECK(KossakowskiMatrix::from_vector(c.as_vector()) == c);
  CHECK(KossakowskiMatrix::from_matrix(c.matrix()) == c);
  CHECK_THROWS_AS(c(3, 0), InputError);
  for (int b = 0; b < 6; ++b) CHECK(KossakowskiMatrix::unit(b).as_vector() == Vector6d::Unit(b));
  CHECK_THROWS_AS(KossakowskiMatrix::unit(6), InputError);
  Eigen::Matrix3d asym = Eigen::Matrix3d::Identity();
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(KossakowskiMatrix::from_matrix(asym), InputError);
  CHECK(KossakowskiMatrix::diagonal(1, 2, 3).is_diagonal());
  CHECK_FALSE(c.is_diagonal());
}

TEST_CASE("diag(1, 1, -1) is not completely positive") {
  const CpReport r = KossakowskiMatrix::diagonal(1, 1, -1).cp_check();
  CHECK_FALSE(r.psd);
  CHECK(r.min_eigenvalue == doctest::Approx(-1.0));
  CHECK(r.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(r.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(r.eigenvalues(2) == doctest::Approx(-1.0));
  CHECK_FALSE(r.minors_satisfied());
  CHECK(r.conditions[0].satisfied);
  CHECK_FALSE(r.conditions[2].satisfied);  // C33
  CHECK_FALSE(r.conditions[6].satisfied);  // det
  CHECK(r.conditions[6].margin == doctest::Approx(-1.0));
}

TEST_CASE("eigenvalue verdict agrees with the principal-minor conditions") {
  kptest::for_all(1000, 31, [](kptest::Gen& g) {
    const Eigen::Matrix3d m = g.uniform(0, 1) < 0.5 ? g.psd() : g.symmetric();
    const CpReport r = KossakowskiMatrix::from_matrix(m).cp_check();
    // Skip draws sitting on the boundary where the two tests use different scales.
    if (std::abs(r.min_eigenvalue) > 1e-8) CHECK(r.psd == r.minors_satisfied());
    CHECK(r.eigenvalues(0) >= r.eigenvalues(1));
    CHECK(r.eigenvalues(1) >= r.eigenvalues(2));
    CHECK(r.min_eigenvalue == r.eigenvalues(2));
  });
}

TEST_CASE("d_tilde of the counterexample") {
  const DTildeMatrix d = d_tilde(KossakowskiMatrix::diagonal(1, 1, -1));
  CHECK(std::abs(d(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(d(1, 1) + 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(d(0, 1)) < 1e-15);
  CHECK(std::abs(d(1, 0)) < 1e-15);
}

TEST_CASE("d_tilde of a hermitian C matches the independent reference") {
  // Frozen from a separate numpy evaluation of <psi3|L[|phi_j><phi_i|]|psi3>.
  Eigen::Matrix3cd c;
  c << 0.8, Complex(0.1, 0.3), Complex(-0.2, -0.1), Complex(0.1, -0.3), 0.6, Complex(0.05, 0.25),
      Complex(-0.2, 0.1), Complex(0.05, -0.25), 0.4;
  Eigen::Matrix2cd expected;
  expected << 0.7999999999999996, Complex(0.009905764571342611, -0.13938468501173515),
      Complex(0.009905764571342502, 0.13938468501173515), 0.23096440627115083;
  CHECK((d_tilde(c) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("d_tilde closed form against brute force") {
  kptest::for_all(200, 32, [](kptest::Gen& g) {
    const Eigen::Matrix3d m = g.symmetric();
    const Eigen::Matrix2cd ref = oracle::d_tilde_bruteforce(m.cast<Complex>());
    CHECK((d_tilde(KossakowskiMatrix::from_matrix(m)) - ref).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::Matrix3cd h = g.hermitian();
    CHECK((d_tilde(h) - oracle::d_tilde_bruteforce(h)).cwiseAbs().maxCoeff() <= 1e-12);
  });
}

TEST_CASE("tabulated d_tilde misses the sqrt2 on C13") {
  const Eigen::Matrix3cd c = KossakowskiMatrix::unit(2).matrix().cast<Complex>();
  const Eigen::Matrix2cd ref = oracle::d_tilde_bruteforce(c);
  CHECK(std::abs(ref(0, 1) - std::sqrt(2.0 / 3.0)) < 1e-14);
  CHECK(std::abs(d_tilde_tabulated(c)(0, 1) - 1.0 / std::sqrt(3.0)) < 1e-14);
}

TEST_CASE("dissipator examples") {
  // C = I on |0><0| gives -2 sigma3.
  Mat2 up = Mat2::Zero();
  up(0, 0) = 1.0;
  CHECK(max_abs(dissipator_spin(KossakowskiMatrix::identity(), up) + 2.0 * pauli(3)) < 1e-15);
  // Pure dephasing kills coherences: C = diag(0, 0, 1) on |+><+| gives -sigma1.
  const Mat2 plus = 0.5 * (Mat2::Identity() + pauli(1));
  CHECK(max_abs(dissipator_spin(KossakowskiMatrix::diagonal(0, 0, 1), plus) + pauli(1)) < 1e-15);
  Mat2 bad = Mat2::Zero();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(dissipator_spin(KossakowskiMatrix::identity(), bad), InputError);
}

TEST_CASE("dissipator is traceless and hermiticity-preserving; lift acts on the impurity") {
  kptest::for_all(200, 33, [](kptest::Gen& g) {
    const KossakowskiMatrix c = KossakowskiMatrix::from_matrix(g.symmetric());
    const Mat2 rho = g.qubit_state();
    const Mat2 l = dissipator_spin(c, rho);
    CHECK(std::abs(l.trace()) < 1e-14);
    CHECK(is_hermitian(l));
    const Mat2 e = g.qubit_state();
    const Mat4 lifted = dissipator_lifted(c, kron(e, rho));
    CHECK(max_abs(lifted - kron(e, l)) < 1e-13);
    const Mat4 rho4 = g.two_qubit_state();
    CHECK(max_abs(dissipator_lifted(c, rho4) -
                  oracle::build_superop(c.matrix(), true).apply(rho4)) < 1e-13);
  });
}

TEST_CASE("Kraus form reproduces the noise term for PSD C") {
  kptest::for_all(300, 34, [](kptest::Gen& g) {
    const KossakowskiMatrix c = KossakowskiMatrix::from_matrix(g.psd());
    const std::vector<Mat2> w = kraus_noise(c);
    CHECK(w.size() <= 3);
    const Mat2 rho = g.qubit_state();
    Mat2 sum = Mat2::Zero();
    for (const Mat2& k : w) sum += k * rho * k.adjoint();
    CHECK(max_abs(sum - noise_term(c, rho)) <= 1e-12);
  });
}

TEST_CASE("Kraus form is refused for non-PSD C") {
  try {
    kraus_noise(KossakowskiMatrix::diagonal(1, 1, -1));
    FAIL("expected NotCompletelyPositive");
  } catch (const NotCompletelyPositive& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-1.0));
  }
}

TEST_CASE("bloch states") {
  const BlochState s{0.3, -0.4, 0.5};
  const BlochState back = BlochState::from_density(s.density());
  CHECK(back.r1 == doctest::Approx(s.r1));
  CHECK(back.r2 == doctest::Approx(s.r2));
  CHECK(back.r3 == doctest::Approx(s.r3));
  CHECK(s.norm() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("diagonal semigroup decay rates") {
  const KossakowskiMatrix c = KossakowskiMatrix::diagonal(0.5, 0.25, 1.0);
  const BlochState s = bloch_evolve(c, {1.0, 1.0, 1.0}, 0.7);
  CHECK(s.r1 == doctest::Approx(std::exp(-2.0 * 1.25 * 0.7)));
  CHECK(s.r2 == doctest::Approx(std::exp(-2.0 * 1.5 * 0.7)));
  CHECK(s.r3 == doctest::Approx(std::exp(-2.0 * 0.75 * 0.7)));
  CHECK_THROWS_AS(bloch_evolve(c, s, -1.0), InputError);
  CHECK_THROWS_AS(bloch_evolve(KossakowskiMatrix(1, 0.1, 0, 1, 0, 1), s, 1.0), InputError);
}
