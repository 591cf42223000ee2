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

#include "kossprobe/reports.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kossprobe/errors.hpp"
#include "kossprobe/kossakowski.hpp"
#include "kossprobe/oracle.hpp"
#include "kossprobe/probe.hpp"
#include "kossprobe/serialization.hpp"

namespace kossprobe::reports {

using nlohmann::json;

namespace {

Eigen::Matrix3d random_symmetric(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

Eigen::Matrix3cd random_hermitian(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i) {
    m(i, i) = u(rng);
    for (int j = i + 1; j < 3; ++j) {
      m(i, j) = Complex(u(rng), u(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

double max_dev(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

json d_tilde_section(std::mt19937_64& rng, const AdjudicationOptions& o) {
  double sym = 0.0, herm = 0.0, tab_sym = 0.0, tab_herm = 0.0;
  for (int n = 0; n < o.trials; ++n) {
    const Eigen::Matrix3d cs = random_symmetric(rng);
    const Eigen::Matrix2cd ref = oracle::d_tilde_bruteforce(cs.cast<Complex>());
    sym = std::max(sym, max_dev(d_tilde(KossakowskiMatrix::from_matrix(cs)), ref));
    tab_sym = std::max(tab_sym, max_dev(d_tilde_tabulated(cs.cast<Complex>()), ref));

    const Eigen::Matrix3cd ch = random_hermitian(rng);
    const Eigen::Matrix2cd ref_h = oracle::d_tilde_bruteforce(ch);
    herm = std::max(herm, max_dev(d_tilde(ch), ref_h));
    tab_herm = std::max(tab_herm, max_dev(d_tilde_tabulated(ch), ref_h));
  }
  return {{"trials", o.trials},
          {"max_deviation_symmetric", sym},
          {"max_deviation_hermitian", herm},
          {"tabulated_max_deviation_symmetric", tab_sym},
          {"tabulated_max_deviation_hermitian", tab_herm},
          {"passed", sym <= o.tolerance && herm <= o.tolerance}};
}

json forward_section(std::mt19937_64& rng, const AdjudicationOptions& o) {
  constexpr std::array<double, 3> kCouplings{0.5, 2.0, 5.0};
  std::array<double, 6> per_channel{};
  for (int n = 0; n < o.trials; ++n) {
    const Eigen::Matrix3d cm = random_symmetric(rng);
    const KossakowskiMatrix c = KossakowskiMatrix::from_matrix(cm);
    for (double g : kCouplings) {
      const ScatteringCoefficients coeffs = coefficients(g);
      const Vector6d fast = forward(c, coeffs).rates;
      for (int b = 0; b < 3; ++b) {
        const auto ref =
            oracle::rates_bruteforce(cm, coeffs, kAllBases[b], kQuarterWavePhase);
        per_channel[b] = std::max(per_channel[b], std::abs(fast(b) - ref.transmitted));
        per_channel[b + 3] = std::max(per_channel[b + 3], std::abs(fast(b + 3) - ref.reflected));
      }
    }
  }
  const double worst = *std::max_element(per_channel.begin(), per_channel.end());
  return {{"trials", o.trials},
          {"g_values", kCouplings},
          {"labels", kChannelLabels},
          {"max_deviation_per_channel", per_channel},
          {"max_deviation", worst},
          {"passed", worst <= o.tolerance}};
}

json appendix_section(const AdjudicationOptions& o) {
  json out = json::array();
  for (double g : {0.5, 2.0, 5.0}) {
    const ScatteringCoefficients coeffs = coefficients(g);
    const ProbeMatrix prog = build_matrix_programmatic(coeffs);
    const ProbeMatrix app = build_matrix_appendix(coeffs);
    const AppendixCoefficients k = appendix_coefficients(coeffs);
    json entry = io::to_json(compare(prog, app, o.tolerance));
    entry["g"] = g;
    entry["det_programmatic"] = prog.det;
    entry["det_appendix"] = app.det;
    entry["condition_number_programmatic"] = prog.condition_number;
    entry["tabulated_coefficients"] = {{"a0", k.a0}, {"a1", k.a1}, {"b", k.b},   {"c", k.c},
                                       {"d0", k.d0}, {"d1", k.d1}, {"e", k.e}, {"f", k.f}};
    out.push_back(entry);
  }
  return out;
}

// Reflected-side P0R coefficient of C11 (and of C22 + 2 C33, through D11)
// under each candidate reflection amplitude and phase sign, against the
// tabulated d_i = 2 - |t_i|^2 + 2 Im t_i.
json convention_section(double g, const AdjudicationOptions& o) {
  const ScatteringCoefficients base = coefficients(g);
  const AppendixCoefficients k = appendix_coefficients(base);
  json candidates = json::array();
  std::string selected;
  for (int flip = 0; flip < 2; ++flip) {
    ScatteringCoefficients c = base;
    if (flip == 1) {
      c.r0 = 1.0 - c.t0;
      c.r1 = 1.0 - c.t1;
    }
    for (int sign = 0; sign < 2; ++sign) {
      const double theta = sign == 0 ? kQuarterWavePhase : -kQuarterWavePhase;
      const double d0 =
          oracle::rates_bruteforce(Eigen::Vector3d(1, 0, 0).asDiagonal().toDenseMatrix(), c,
                                   BasisLabel::canonical, theta)
              .reflected;
      const double d1 =
          oracle::rates_bruteforce(Eigen::Vector3d(0, 1, 0).asDiagonal().toDenseMatrix(), c,
                                   BasisLabel::canonical, theta)
              .reflected;
      const bool match = std::abs(d0 - k.d0) <= o.tolerance && std::abs(d1 - k.d1) <= o.tolerance;
      const std::string refl = flip == 0 ? "r = t - 1" : "r = 1 - t";
      const std::string phase = sign == 0 ? "2kx = pi/2 with x < 0" : "2k|x| = pi/2";
      candidates.push_back(
          {{"reflection", refl}, {"phase", phase}, {"d0", d0}, {"d1", d1}, {"matches", match}});
      if (match && selected.empty()) selected = refl + ", " + phase;
    }
  }
  return {{"g", g},
          {"tabulated_d0", k.d0},
          {"tabulated_d1", k.d1},
          {"candidates", candidates},
          {"selected", selected.empty() ? json(nullptr) : json(selected)}};
}

}  // namespace

Adjudication adjudicate(const AdjudicationOptions& options) {
  if (options.trials <= 0) throw InputError("trials must be positive");
  if (!(options.tolerance > 0.0)) throw InputError("tolerance must be positive");
  std::mt19937_64 rng(options.seed);
  Adjudication out;
  json& r = out.report;
  r = {{"schema_version", io::kSchemaVersion},
       {"kind", "adjudication_report"},
       {"seed", options.seed},
       {"trials", options.trials},
       {"tolerance", options.tolerance}};
  r["d_tilde"] = d_tilde_section(rng, options);
  r["forward"] = forward_section(rng, options);
  r["appendix_matrix"] = appendix_section(options);
  r["reflection_convention"] = convention_section(2.0, options);
  out.passed = r["d_tilde"]["passed"].get<bool>() && r["forward"]["passed"].get<bool>();
  r["passed"] = out.passed;
  return out;
}

json negative_rate_demo(double g) {
  if (!std::isfinite(g) || g <= 0.0) throw InputError("demo-negative needs a finite g > 0");
  const KossakowskiMatrix c = KossakowskiMatrix::diagonal(1.0, 1.0, -1.0);
  const ScatteringCoefficients coeffs = coefficients(g);
  const CpReport cp = c.cp_check();
  const ProbeResult rates = forward(c, coeffs);

  // Bloch-ball positivity: Fibonacci points on spheres of radius 1 and 0.5,
  // evolved exactly over t in [0, 5].
  constexpr int kSphere = 64;
  constexpr int kSteps = 50;
  constexpr double kTMax = 5.0;
  std::vector<BlochState> states;
  for (double radius : {1.0, 0.5}) {
    for (int n = 0; n < kSphere; ++n) {
      const double z = 1.0 - (2.0 * n + 1.0) / kSphere;
      const double rho = std::sqrt(1.0 - z * z);
      const double phi = n * std::numbers::pi * (3.0 - std::sqrt(5.0));
      states.push_back({radius * rho * std::cos(phi), radius * rho * std::sin(phi), radius * z});
    }
  }
  double max_norm = 0.0;
  double min_eig = 1.0;
  double oracle_dev = 0.0;
  bool monotone = true;
  const Eigen::Matrix3d cm = c.matrix();
  for (const BlochState& s0 : states) {
    double prev = s0.norm();
    for (int step = 0; step <= kSteps; ++step) {
      const double t = kTMax * step / kSteps;
      const BlochState s = bloch_evolve(c, s0, t);
      const double nrm = s.norm();
      monotone = monotone && nrm <= prev + 1e-12;
      prev = nrm;
      max_norm = std::max(max_norm, nrm);
      min_eig = std::min(min_eig, min_eigenvalue(s.density()));
      if (step % 10 == 0) {
        const Mat2 exact = oracle::exact_qubit_evolution(cm, s0.density(), t);
        oracle_dev = std::max(oracle_dev, max_abs(exact - s.density()));
      }
    }
  }

  const Vec4 psi3 = basis(BasisLabel::canonical).probe();
  const Mat4 rho = psi3 * psi3.adjoint();
  constexpr double kSmallT = 1e-3;
  const Mat4 evolved = oracle::exact_lifted_evolution(cm, rho, kSmallT);
  const Mat4 first_order = rho + kSmallT * dissipator_lifted(c, rho);

  json rate_json = io::to_json(rates);
  return {{"schema_version", io::kSchemaVersion},
          {"kind", "negative_rate_demo"},
          {"g", g},
          {"c", io::to_json(c)},
          {"verdict", cp.psd ? "completely positive" : "not completely positive"},
          {"cp_report", io::to_json(cp)},
          {"rates", rate_json},
          {"transmitted_rate", rates.rates(0)},
          {"expected_transmitted_rate", std::norm(coeffs.t0) - std::norm(coeffs.t1)},
          {"bloch_positivity",
           {{"t_max", kTMax},
            {"time_steps", kSteps + 1},
            {"states", states.size()},
            {"max_norm", max_norm},
            {"min_eigenvalue", min_eig},
            {"norm_non_increasing", monotone},
            {"oracle_max_deviation", oracle_dev},
            {"positive", max_norm <= 1.0 + 1e-12 && min_eig >= -1e-12}}},
          {"lifted_psi3",
           {{"t", kSmallT},
            {"min_eigenvalue", min_eigenvalue(evolved)},
            {"first_order_min_eigenvalue", min_eigenvalue(first_order)},
            {"positive", min_eigenvalue(evolved) >= -1e-12}}}};
}

}  // namespace kossprobe::reports
