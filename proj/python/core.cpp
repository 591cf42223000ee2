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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>

#include "kossprobe/errors.hpp"
#include "kossprobe/experiment.hpp"
#include "kossprobe/inversion.hpp"
#include "kossprobe/kossakowski.hpp"
#include "kossprobe/oracle.hpp"
#include "kossprobe/probe.hpp"
#include "kossprobe/reports.hpp"
#include "kossprobe/scattering.hpp"
#include "kossprobe/serialization.hpp"

namespace py = pybind11;
using namespace kossprobe;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::object& o) {
  const std::string s = py::module_::import("json").attr("dumps")(o).cast<std::string>();
  return nlohmann::json::parse(s);
}

KossakowskiMatrix as_c(const Eigen::Matrix3d& m) { return KossakowskiMatrix::from_matrix(m); }

Vector6d as_six(const Eigen::VectorXd& v, const char* what) {
  if (v.size() != 6) throw InputError(std::string(what) + " must have 6 entries");
  return v;
}

py::dict coeff_dict(const ScatteringCoefficients& c) {
  py::dict d;
  d["g"] = c.g;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["r0"] = c.r0;
  d["r1"] = c.r1;
  return d;
}

ProbeMatrix matrix_for(double g, double phase, const std::string& source) {
  if (source == "programmatic") return build_matrix_programmatic(coefficients(g), phase);
  if (source == "appendix") {
    if (!is_canonical_phase(phase)) {
      throw InputError("the tabulated matrix exists only at the quarter-wave phase");
    }
    return build_matrix_appendix(coefficients(g));
  }
  throw InputError("source must be 'programmatic' or 'appendix'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kossakowski-matrix probing by electron scattering (C++ core)";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalRefusal>(m, "NumericalRefusal", PyExc_ArithmeticError);
  py::register_exception<NotCompletelyPositive>(m, "NotCompletelyPositive", PyExc_ValueError);

  m.attr("QUARTER_WAVE_PHASE") = kQuarterWavePhase;
  m.attr("CHANNEL_LABELS") = kChannelLabels;
  m.attr("PARAMETER_NAMES") = kParameterNames;

  m.def("coefficients", [](double g) { return coeff_dict(coefficients(g)); }, py::arg("g"),
        "Singlet/triplet transmission and reflection amplitudes at coupling g.");
  m.def(
      "coefficients_physical",
      [](double j, double e, double mass, double hbar) {
        const ScatteringParams p = ScatteringParams::from_physical({j, e, mass, hbar});
        py::dict d = coeff_dict(coefficients(p));
        d["k"] = *p.k;
        return d;
      },
      py::arg("J"), py::arg("E"), py::arg("mass"), py::arg("hbar"));

  m.def(
      "forward",
      [](const Eigen::Matrix3d& c, double g, double phase) {
        return Eigen::VectorXd(forward(as_c(c), coefficients(g), phase).rates);
      },
      py::arg("c"), py::arg("g"), py::arg("phase") = kQuarterWavePhase,
      "The six detection rates (P0T, P1T, P2T, P0R, P1R, P2R).");

  m.def(
      "build_matrix",
      [](double g, double phase, const std::string& source) {
        const ProbeMatrix pm = matrix_for(g, phase, source);
        py::dict d;
        d["m"] = Eigen::MatrixXd(pm.m);
        d["det"] = pm.det;
        d["condition_number"] = pm.condition_number;
        d["source"] = std::string(to_string(pm.source));
        d["g"] = pm.g;
        d["phase"] = pm.phase;
        return d;
      },
      py::arg("g"), py::arg("phase") = kQuarterWavePhase, py::arg("source") = "programmatic");

  m.def(
      "d_tilde", [](const Eigen::Matrix3cd& c) { return Eigen::Matrix2cd(d_tilde(c)); },
      py::arg("c"));
  m.def(
      "d_tilde_bruteforce",
      [](const Eigen::Matrix3cd& c) { return Eigen::Matrix2cd(oracle::d_tilde_bruteforce(c)); },
      py::arg("c"));

  m.def(
      "cp_check",
      [](const Eigen::Matrix3d& c, double tol) { return to_py(io::to_json(as_c(c).cp_check(tol))); },
      py::arg("c"), py::arg("tolerance") = kCpTolerance);
  m.def(
      "psd_project", [](const Eigen::Matrix3d& c) { return psd_project(as_c(c)).matrix(); },
      py::arg("c"));
  m.def(
      "kraus_noise",
      [](const Eigen::Matrix3d& c) {
        std::vector<Eigen::Matrix2cd> out;
        for (const Mat2& w : kraus_noise(as_c(c))) out.emplace_back(w);
        return out;
      },
      py::arg("c"));
  m.def(
      "bloch_evolve",
      [](const Eigen::Matrix3d& c, const Eigen::Vector3d& r, double t) {
        const BlochState s = bloch_evolve(as_c(c), {r(0), r(1), r(2)}, t);
        return Eigen::Vector3d(s.r1, s.r2, s.r3);
      },
      py::arg("c"), py::arg("r"), py::arg("t"));

  m.def(
      "invert_exact",
      [](const Eigen::VectorXd& rates, double g, double phase) {
        const ProbeMatrix pm = build_matrix_programmatic(coefficients(g), phase);
        return invert_exact(as_six(rates, "rates"), pm).matrix();
      },
      py::arg("rates"), py::arg("g"), py::arg("phase") = kQuarterWavePhase);
  m.def(
      "invert_noisy",
      [](const Eigen::VectorXd& rates, const Eigen::VectorXd& sigmas, double g, double phase,
         double z, int bootstrap_samples, std::uint64_t seed) {
        const ProbeMatrix pm = build_matrix_programmatic(coefficients(g), phase);
        InversionOptions o;
        o.z = z;
        o.bootstrap_samples = bootstrap_samples;
        o.seed = seed;
        return to_py(io::to_json(
            invert_noisy(as_six(rates, "rates"), as_six(sigmas, "sigmas"), pm, o)));
      },
      py::arg("rates"), py::arg("sigmas"), py::arg("g"), py::arg("phase") = kQuarterWavePhase,
      py::arg("z") = 3.0, py::arg("bootstrap_samples") = 2000, py::arg("seed") = 0x5eed);

  m.def(
      "simulate",
      [](const Eigen::Matrix3d& c, double g, std::uint64_t shots, double exposure,
         double calibration, std::uint64_t seed, double phase) {
        ExperimentConfig cfg;
        cfg.true_c = as_c(c);
        cfg.g = g;
        cfg.phase = phase;
        cfg.exposure = exposure;
        cfg.calibration = calibration;
        cfg.shots_per_channel = shots;
        cfg.seed = seed;
        ExperimentRun r;
        {
          py::gil_scoped_release release;
          r = run(cfg);
        }
        return to_py(io::to_json(r));
      },
      py::arg("c"), py::arg("g"), py::arg("shots"), py::arg("exposure"),
      py::arg("calibration"), py::arg("seed"), py::arg("phase") = kQuarterWavePhase,
      "Run a virtual experiment; returns the experiment_run document.");
  m.def(
      "run_csv",
      [](const py::object& run_doc) {
        return io::run_to_csv(io::experiment_run_from_json(from_py(run_doc)));
      },
      py::arg("run"));
  m.def(
      "estimate",
      [](const py::list& run_docs, int bootstrap_samples, std::uint64_t seed) {
        std::vector<ExperimentRun> runs;
        for (const auto& d : run_docs) {
          runs.push_back(io::experiment_run_from_json(from_py(py::reinterpret_borrow<py::object>(d))));
        }
        InversionOptions o;
        o.bootstrap_samples = bootstrap_samples;
        o.seed = seed;
        return to_py(io::to_json(estimate(std::span<const ExperimentRun>(runs), o)));
      },
      py::arg("runs"), py::arg("bootstrap_samples") = 2000, py::arg("seed") = 0x5eed);

  m.def(
      "adjudicate",
      [](int trials, std::uint64_t seed, double tolerance) {
        return to_py(reports::adjudicate({trials, seed, tolerance}).report);
      },
      py::arg("trials") = 100, py::arg("seed") = reports::AdjudicationOptions{}.seed,
      py::arg("tolerance") = 1e-12);
  m.def(
      "negative_rate_demo", [](double g) { return to_py(reports::negative_rate_demo(g)); },
      py::arg("g") = 2.0);
}
