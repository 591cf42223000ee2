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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kossprobe/errors.hpp"
#include "kossprobe/experiment.hpp"
#include "kossprobe/inversion.hpp"
#include "kossprobe/kossakowski.hpp"
#include "kossprobe/probe.hpp"
#include "kossprobe/reports.hpp"
#include "kossprobe/scattering.hpp"
#include "kossprobe/serialization.hpp"

namespace kossprobe::cli {

namespace {

using nlohmann::json;

enum class Format { json, csv, text };

struct Globals {
  Format format = Format::json;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;

  double tolerance_or(double fallback) const { return tolerance.value_or(fallback); }
};

struct Ctx {
  Globals globals;
  std::ostream& out;
  std::ostream& err;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string cnum(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.10g%+.10gi", z.real(), z.imag());
  return buf;
}

void emit(Ctx& ctx, const json& payload, const std::string& csv, const std::string& text) {
  switch (ctx.globals.format) {
    case Format::json: ctx.out << payload.dump(2) << "\n"; break;
    case Format::csv: ctx.out << csv; break;
    case Format::text: ctx.out << text; break;
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InputError(std::string(name) + " must be finite");
}

KossakowskiMatrix read_kossakowski(const std::string& path) {
  return io::kossakowski_from_json(io::read_json_file(path));
}

void check_same(double given, double recorded, const char* what) {
  if (std::abs(given - recorded) > 1e-12 * std::max(1.0, std::abs(given))) {
    throw InputError(std::string("input was produced at ") + what + " = " + num(recorded) +
                     " but " + num(given) + " was requested");
  }
}

std::optional<std::string> timestamp_from_env() {
  const char* sde = std::getenv("SOURCE_DATE_EPOCH");
  if (sde == nullptr || *sde == '\0') return std::nullopt;
  char* end = nullptr;
  const long long secs = std::strtoll(sde, &end, 10);
  if (*end != '\0' || secs < 0) throw InputError("SOURCE_DATE_EPOCH must be a non-negative integer");
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

// ---------------------------------------------------------------- coeffs

struct CoeffsArgs {
  std::optional<double> g, j, e, mass, hbar, g_to;
  int steps = 0;
};

json coeff_row(const ScatteringCoefficients& c) {
  json j = io::to_json(c);
  j.erase("schema_version");
  j.erase("kind");
  return j;
}

std::string coeff_csv_header() {
  return "g,t0_re,t0_im,t1_re,t1_im,r0_re,r0_im,r1_re,r1_im,T0,T1\n";
}

std::string coeff_csv_row(const ScatteringCoefficients& c) {
  std::string s = io::format_double(c.g);
  for (Complex z : {c.t0, c.t1, c.r0, c.r1}) {
    s += "," + io::format_double(z.real()) + "," + io::format_double(z.imag());
  }
  s += "," + io::format_double(std::norm(c.t0)) + "," + io::format_double(std::norm(c.t1));
  return s + "\n";
}

std::string coeff_text(const ScatteringCoefficients& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-34s %-34s\n", "channel", "t", "r");
  std::string s = "g = " + num(c.g) + "\n" + buf;
  std::snprintf(buf, sizeof buf, "%-8s %-34s %-34s\n", "singlet", cnum(c.t0).c_str(),
                cnum(c.r0).c_str());
  s += buf;
  std::snprintf(buf, sizeof buf, "%-8s %-34s %-34s\n", "triplet", cnum(c.t1).c_str(),
                cnum(c.r1).c_str());
  return s + buf;
}

int cmd_coeffs(Ctx& ctx, const CoeffsArgs& a) {
  const bool any_physical = a.j || a.e || a.mass || a.hbar;
  const bool all_physical = a.j && a.e && a.mass && a.hbar;
  if (any_physical && !all_physical) {
    throw InputError("--J, --E, --mass and --hbar must be given together");
  }
  if (!a.g && !all_physical) throw InputError("give --g or all of --J --E --mass --hbar");

  ScatteringParams params;
  if (all_physical) {
    params = ScatteringParams::from_physical({*a.j, *a.e, *a.mass, *a.hbar});
    if (a.g) {
      params.g = *a.g;
      params.validate();
    }
  } else {
    params = ScatteringParams::dimensionless(*a.g);
  }
  params.validate();

  if (a.g_to || a.steps > 0) {
    if (!a.g_to || a.steps <= 0 || all_physical) {
      throw InputError("a sweep needs --g, --g-to and --steps > 0");
    }
    require_finite(*a.g_to, "--g-to");
    json rows = json::array();
    std::string csv = coeff_csv_header();
    std::string text;
    for (int i = 0; i <= a.steps; ++i) {
      const double g = params.g + (*a.g_to - params.g) * i / a.steps;
      const ScatteringCoefficients c = coefficients(g);
      rows.push_back(coeff_row(c));
      csv += coeff_csv_row(c);
      text += coeff_text(c);
    }
    json payload = {{"schema_version", io::kSchemaVersion},
                    {"kind", "coefficient_sweep"},
                    {"rows", rows}};
    emit(ctx, payload, csv, text);
    return kExitOk;
  }

  const ScatteringCoefficients c = coefficients(params);
  json payload = io::to_json(c);
  std::string text = coeff_text(c);
  if (all_physical) {
    payload["physical"] = {{"J", *a.j}, {"E", *a.e}, {"mass", *a.mass}, {"hbar", *a.hbar}};
    payload["k"] = *params.k;
    payload["density_of_states"] = density_of_states(*a.e, *a.mass, *a.hbar);
    text += "k = " + num(*params.k) + "\n";
  }
  emit(ctx, payload, coeff_csv_header() + coeff_csv_row(c), text);
  return kExitOk;
}

// ---------------------------------------------------------------- forward

struct ForwardArgs {
  std::string c_file;
  double g = 0.0;
  double phase = kQuarterWavePhase;
};

std::string rates_text(const Vector6d& r, const std::optional<Vector6d>& s = std::nullopt) {
  std::string out;
  for (int k = 0; k < 6; ++k) {
    out += std::string(kChannelLabels[k]) + "  " + num(r(k));
    if (s) out += "  +/- " + num((*s)(k));
    out += "\n";
  }
  return out;
}

int cmd_forward(Ctx& ctx, const ForwardArgs& a) {
  require_finite(a.g, "--g");
  require_finite(a.phase, "--phase");
  const KossakowskiMatrix c = read_kossakowski(a.c_file);
  const ProbeResult r = forward(c, coefficients(a.g), a.phase);
  emit(ctx, io::to_json(r), io::rates_to_csv({r.rates, std::nullopt}), rates_text(r.rates));
  return kExitOk;
}

// ---------------------------------------------------------------- build-matrix

struct BuildArgs {
  double g = 0.0;
  double phase = kQuarterWavePhase;
  std::string source = "programmatic";
};

std::string matrix_csv_rows(const ProbeMatrix& m) {
  std::string s;
  for (int i = 0; i < 6; ++i) {
    s += std::string(to_string(m.source)) + "," + kChannelLabels[i];
    for (int j = 0; j < 6; ++j) s += "," + io::format_double(m.m(i, j));
    s += "\n";
  }
  return s;
}

std::string matrix_text(const ProbeMatrix& m) {
  char buf[64];
  std::string s = std::string(to_string(m.source)) + " M at g = " + num(m.g) + "\n      ";
  for (const char* p : kParameterNames) {
    std::snprintf(buf, sizeof buf, "%12s", p);
    s += buf;
  }
  s += "\n";
  for (int i = 0; i < 6; ++i) {
    std::snprintf(buf, sizeof buf, "%-6s", kChannelLabels[i]);
    s += buf;
    for (int j = 0; j < 6; ++j) {
      std::snprintf(buf, sizeof buf, "%12.6f", m.m(i, j));
      s += buf;
    }
    s += "\n";
  }
  return s + "det = " + num(m.det) + ", condition number = " + num(m.condition_number) + "\n";
}

int cmd_build_matrix(Ctx& ctx, const BuildArgs& a) {
  require_finite(a.g, "--g");
  require_finite(a.phase, "--phase");
  const ScatteringCoefficients coeffs = coefficients(a.g);
  const bool want_prog = a.source != "appendix";
  const bool want_app = a.source != "programmatic";
  if (want_app && !is_canonical_phase(a.phase)) {
    throw InputError("the tabulated matrix exists only at the quarter-wave phase");
  }
  const std::string header = "source,row,c11,c12,c13,c22,c23,c33\n";
  if (want_prog && want_app) {
    const ProbeMatrix prog = build_matrix_programmatic(coeffs, a.phase);
    const ProbeMatrix app = build_matrix_appendix(coeffs);
    const MatrixDeviation dev = compare(prog, app, ctx.globals.tolerance_or(1e-12));
    json payload = {{"schema_version", io::kSchemaVersion},
                    {"kind", "probe_matrix_comparison"},
                    {"programmatic", io::to_json(prog)},
                    {"appendix", io::to_json(app)},
                    {"deviation", io::to_json(dev)}};
    std::string text = matrix_text(prog) + "\n" + matrix_text(app) + "\n" +
                       std::to_string(dev.entries.size()) + " entries differ, max |diff| = " +
                       num(dev.max_abs) + "\n";
    emit(ctx, payload, header + matrix_csv_rows(prog) + matrix_csv_rows(app), text);
    return kExitOk;
  }
  const ProbeMatrix m =
      want_prog ? build_matrix_programmatic(coeffs, a.phase) : build_matrix_appendix(coeffs);
  emit(ctx, io::to_json(m), header + matrix_csv_rows(m), matrix_text(m));
  return kExitOk;
}

// ---------------------------------------------------------------- invert

struct InvertArgs {
  std::string rates;
  std::optional<std::string> sigmas;
  double g = 0.0;
  double phase = kQuarterWavePhase;
  std::optional<double> exposure, calibration;
  bool project_psd = false;
  double z = 3.0;
  int bootstrap = 2000;
};

bool looks_like_json(const std::string& text) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t') continue;
    return ch == '{' || ch == '[';
  }
  return false;
}

Vector6d json_six(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 6) throw InputError(std::string(what) + " must have 6 entries");
  Vector6d v;
  for (int k = 0; k < 6; ++k) {
    if (!j[k].is_number()) throw InputError(std::string(what) + " entries must be numbers");
    v(k) = j[k].get<double>();
  }
  return v;
}

io::RateTable load_rates(const InvertArgs& a) {
  const std::string text = io::read_text_file(a.rates);
  if (!looks_like_json(text)) {
    std::optional<double> scale;
    if (a.exposure || a.calibration) {
      if (!a.exposure || !a.calibration) {
        throw InputError("--exposure and --calibration must be given together");
      }
      scale = *a.exposure * *a.calibration;
      if (!(*scale > 0.0) || !std::isfinite(*scale)) {
        throw InputError("exposure * calibration must be positive");
      }
    }
    return io::rate_table_from_csv(text, scale);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + a.rates + "' is not valid JSON: " + e.what());
  }
  const std::string kind = j.is_object() ? j.value("kind", "") : "";
  if (kind == "experiment_run") {
    const ExperimentRun run = io::experiment_run_from_json(j);
    check_same(a.g, run.config.g, "g");
    check_same(a.phase, run.config.phase, "phase");
    const PooledRates p = pool(std::span<const ExperimentRun>(&run, 1));
    return {p.rates, p.sigmas};
  }
  if (kind == "probe_rates") {
    if (j.contains("g")) check_same(a.g, j.at("g").get<double>(), "g");
    if (j.contains("phase")) check_same(a.phase, j.at("phase").get<double>(), "phase");
    io::RateTable t{json_six(j.at("rates"), "rates"), std::nullopt};
    if (j.contains("sigmas")) t.sigmas = json_six(j.at("sigmas"), "sigmas");
    return t;
  }
  if (j.is_array()) return {json_six(j, "rates"), std::nullopt};
  throw InputError("rates JSON must be a probe_rates or experiment_run document");
}

Vector6d load_sigmas(const std::string& path) {
  const std::string text = io::read_text_file(path);
  if (looks_like_json(text)) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return json_six(j.is_object() ? j.at("sigmas") : j, "sigmas");
  }
  // label,sigma
  std::istringstream in(text);
  std::string line;
  bool header = false;
  Vector6d v = Vector6d::Zero();
  std::array<bool, 6> seen{};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "label,sigma") throw InputError("sigmas CSV header must be 'label,sigma'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError("malformed sigmas row '" + line + "'");
    const std::string label = line.substr(0, comma);
    int k = 0;
    while (k < 6 && label != kChannelLabels[k]) ++k;
    if (k == 6) throw InputError("unknown channel label '" + label + "'");
    try {
      v(k) = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw InputError("malformed sigmas row '" + line + "'");
    }
    seen[k] = true;
  }
  for (int k = 0; k < 6; ++k) {
    if (!seen[k]) throw InputError(std::string("sigmas missing channel ") + kChannelLabels[k]);
  }
  return v;
}

int cmd_invert(Ctx& ctx, const InvertArgs& a) {
  require_finite(a.g, "--g");
  require_finite(a.phase, "--phase");
  if (!(a.z > 0.0)) throw InputError("--z must be positive");
  if (a.bootstrap < 2) throw InputError("--bootstrap must be at least 2");
  io::RateTable table = load_rates(a);
  if (a.sigmas) table.sigmas = load_sigmas(*a.sigmas);
  const Vector6d sigmas = table.sigmas.value_or(Vector6d::Zero());

  const ProbeMatrix m = build_matrix_programmatic(coefficients(a.g), a.phase);
  InversionOptions opts;
  opts.z = a.z;
  opts.bootstrap_samples = a.bootstrap;
  if (ctx.globals.seed) opts.seed = *ctx.globals.seed;
  InversionResult r = invert_noisy(table.rates, sigmas, m, opts);
  if (ctx.globals.tolerance) r.diagnostics = r.c_hat.cp_check(*ctx.globals.tolerance);

  json payload = io::to_json(r);
  payload["g"] = a.g;
  payload["phase"] = a.phase;
  std::optional<KossakowskiMatrix> projected;
  if (a.project_psd) {
    projected = psd_project(r.c_hat);
    payload["c_psd"] = io::to_json(*projected);
  }

  const Vector6d est = r.c_hat.as_vector();
  const Vector6d se = r.standard_errors();
  std::string csv = projected ? "parameter,estimate,std_error,projected\n"
                              : "parameter,estimate,std_error\n";
  std::string text;
  for (int k = 0; k < 6; ++k) {
    csv += std::string(kParameterNames[k]) + "," + io::format_double(est(k)) + "," +
           io::format_double(se(k));
    if (projected) csv += "," + io::format_double(projected->as_vector()(k));
    csv += "\n";
    text += std::string(kParameterNames[k]) + " = " + num(est(k)) + " +/- " + num(se(k)) + "\n";
  }
  text += "verdict: " + std::string(to_string(r.verdict)) + " (lambda_min = " + num(r.margin) +
          " +/- " + num(r.margin_sigma) + ")\n";
  emit(ctx, payload, csv, text);
  return kExitOk;
}

// ---------------------------------------------------------------- cp-check

int cmd_cp_check(Ctx& ctx, const std::string& c_file) {
  const KossakowskiMatrix c = read_kossakowski(c_file);
  const CpReport r = c.cp_check(ctx.globals.tolerance_or(kCpTolerance));
  json payload = io::to_json(r);
  payload["c"] = io::to_json(c);
  std::string csv = "condition,margin,satisfied\n";
  std::string text = std::string(r.psd ? "completely positive" : "not completely positive") +
                     "\neigenvalues: " + num(r.eigenvalues(0)) + ", " + num(r.eigenvalues(1)) +
                     ", " + num(r.eigenvalues(2)) + "\n";
  for (const auto& cond : r.conditions) {
    csv += cond.name + "," + io::format_double(cond.margin) + "," +
           (cond.satisfied ? "true" : "false") + "\n";
    text += "  " + cond.name + " = " + num(cond.margin) + (cond.satisfied ? "  ok" : "  VIOLATED") +
            "\n";
  }
  emit(ctx, payload, csv, text);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string c_file;
  double g = 0.0;
  double phase = kQuarterWavePhase;
  std::uint64_t shots = 0;
  double exposure = 0.0;
  double calibration = 0.0;
  std::string out_dir;
};

int cmd_simulate(Ctx& ctx, const SimulateArgs& a) {
  if (!ctx.globals.seed) throw InputError("simulate needs --seed");
  ExperimentConfig cfg;
  cfg.true_c = read_kossakowski(a.c_file);
  cfg.g = a.g;
  cfg.phase = a.phase;
  cfg.exposure = a.exposure;
  cfg.calibration = a.calibration;
  cfg.shots_per_channel = a.shots;
  cfg.seed = *ctx.globals.seed;
  validate(cfg);

  ExperimentRun r = run(cfg);
  r.timestamp = timestamp_from_env();

  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create '" + a.out_dir + "': " + ec.message());
  const json doc = io::to_json(r);
  const std::string csv = io::run_to_csv(r);
  io::write_text_file((dir / "run.json").string(), doc.dump(2) + "\n");
  io::write_text_file((dir / "run.csv").string(), csv);

  std::string text = "config " + r.config_hash + ", " + std::to_string(a.shots) +
                     " shots per channel\n";
  for (const auto& ch : r.channels) {
    text += ch.label + "  " + std::to_string(ch.detections) + "/" + std::to_string(ch.trials) +
            "  p_hat = " + num(ch.p_hat()) + (ch.clamped ? "  (clamped)" : "") + "\n";
  }
  for (const auto& label : r.unphysical_channels()) {
    ctx.err << "warning: channel " << label << " has a negative model rate\n";
  }
  emit(ctx, doc, csv, text);
  return kExitOk;
}

// ---------------------------------------------------------------- demo-negative

int cmd_demo(Ctx& ctx, double g) {
  json report = reports::negative_rate_demo(g);
  if (ctx.globals.tolerance) {
    const CpReport cp = KossakowskiMatrix::diagonal(1, 1, -1).cp_check(*ctx.globals.tolerance);
    report["cp_report"] = io::to_json(cp);
    report["verdict"] = cp.psd ? "completely positive" : "not completely positive";
  }
  const auto& bloch = report["bloch_positivity"];
  const auto& lifted = report["lifted_psi3"];
  std::string text =
      "C = diag(1, 1, -1) at g = " + num(g) + "\n" + "verdict: " +
      report["verdict"].get<std::string>() + "\n" +
      "canonical transmitted rate P0T = " + num(report["transmitted_rate"].get<double>()) +
      " (|t0|^2 - |t1|^2 = " + num(report["expected_transmitted_rate"].get<double>()) + ")\n" +
      "single-qubit evolution on t in [0, " + num(bloch["t_max"].get<double>()) +
      "]: max |r| = " + num(bloch["max_norm"].get<double>()) + ", min eigenvalue = " +
      num(bloch["min_eigenvalue"].get<double>()) + "\n" +
      "lifted evolution of |psi3><psi3| at t = " + num(lifted["t"].get<double>()) +
      ": min eigenvalue = " + num(lifted["min_eigenvalue"].get<double>()) + "\n";
  const Vector6d rates = json_six(report["rates"]["rates"], "rates");
  emit(ctx, report, io::rates_to_csv({rates, std::nullopt}), text);
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(Ctx& ctx, int trials, const std::optional<std::string>& out_path) {
  reports::AdjudicationOptions opts;
  opts.trials = trials;
  if (ctx.globals.seed) opts.seed = *ctx.globals.seed;
  opts.tolerance = ctx.globals.tolerance_or(opts.tolerance);
  const reports::Adjudication a = reports::adjudicate(opts);
  if (out_path) io::write_text_file(*out_path, a.report.dump(2) + "\n");

  std::string csv = "g,row,column,reference,candidate\n";
  for (const auto& entry : a.report["appendix_matrix"]) {
    for (const auto& e : entry["entries"]) {
      csv += io::format_double(entry["g"].get<double>()) + "," + e["row"].get<std::string>() +
             "," + e["column"].get<std::string>() + "," +
             io::format_double(e["reference"].get<double>()) + "," +
             io::format_double(e["candidate"].get<double>()) + "\n";
    }
  }
  const auto& r = a.report;
  std::string text =
      "d_tilde closed form vs brute force: " + num(r["d_tilde"]["max_deviation_hermitian"]) +
      " (hermitian), " + num(r["d_tilde"]["max_deviation_symmetric"]) + " (symmetric)\n" +
      "forward vs brute force: " + num(r["forward"]["max_deviation"]) + "\n" +
      "reflection convention: " + r["reflection_convention"]["selected"].dump() + "\n";
  for (const auto& entry : r["appendix_matrix"]) {
    text += "appendix M at g = " + num(entry["g"]) + ": " +
            std::to_string(entry["entries"].size()) + " entries differ\n";
  }
  text += a.passed ? "PASS\n" : "FAIL\n";
  emit(ctx, a.report, csv, text);
  if (!a.passed) {
    ctx.err << "closed form deviates from the oracle beyond " << num(opts.tolerance) << "\n";
    return kExitOracle;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kossakowski-matrix probing of a magnetic impurity by electron scattering",
               "kossprobe"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals globals;
  std::string output = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  app.add_option("--output", output, "Payload format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "Master seed for random streams");
  app.add_option("--tolerance", tolerance,
                 "Numerical tolerance (overrides KOSSPROBE_TOLERANCE)");

  CoeffsArgs coeffs_args;
  auto* coeffs = app.add_subcommand("coeffs", "Transmission and reflection amplitudes");
  coeffs->add_option("--g", coeffs_args.g, "Dimensionless coupling pi J rho(E) / 4");
  coeffs->add_option("--J", coeffs_args.j, "Exchange coupling");
  coeffs->add_option("--E", coeffs_args.e, "Electron energy");
  coeffs->add_option("--mass", coeffs_args.mass, "Electron mass");
  coeffs->add_option("--hbar", coeffs_args.hbar, "Reduced Planck constant");
  coeffs->add_option("--g-to", coeffs_args.g_to, "Sweep end point");
  coeffs->add_option("--steps", coeffs_args.steps, "Sweep intervals");

  ForwardArgs forward_args;
  auto* fwd = app.add_subcommand("forward", "Six detection rates for a Kossakowski matrix");
  fwd->add_option("--c-file", forward_args.c_file, "Kossakowski matrix JSON")->required();
  fwd->add_option("--g", forward_args.g, "Dimensionless coupling")->required();
  fwd->add_option("--phase", forward_args.phase, "Reflected-side phase 2kx");

  BuildArgs build_args;
  auto* build = app.add_subcommand("build-matrix", "The 6x6 probe matrix");
  build->add_option("--g", build_args.g, "Dimensionless coupling")->required();
  build->add_option("--phase", build_args.phase, "Reflected-side phase 2kx");
  build->add_option("--source", build_args.source, "Matrix source")
      ->check(CLI::IsMember({"programmatic", "appendix", "both"}));

  InvertArgs invert_args;
  auto* inv = app.add_subcommand("invert", "Estimate C from measured rates");
  inv->add_option("--rates", invert_args.rates, "Rates CSV/JSON or experiment run")->required();
  inv->add_option("--g", invert_args.g, "Dimensionless coupling")->required();
  inv->add_option("--phase", invert_args.phase, "Reflected-side phase 2kx");
  inv->add_option("--sigmas", invert_args.sigmas, "Per-channel standard deviations");
  inv->add_option("--exposure", invert_args.exposure, "Exposure for a run CSV");
  inv->add_option("--calibration", invert_args.calibration, "Calibration for a run CSV");
  inv->add_flag("--project-psd", invert_args.project_psd, "Also report the nearest PSD C");
  inv->add_option("--z", invert_args.z, "Significance for a not-CP verdict");
  inv->add_option("--bootstrap", invert_args.bootstrap, "Bootstrap draws for sigma(lambda_min)");

  std::string cp_file;
  auto* cp = app.add_subcommand("cp-check", "Complete-positivity diagnostics");
  cp->add_option("--c-file", cp_file, "Kossakowski matrix JSON")->required();

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Shot-by-shot virtual experiment");
  sim->add_option("--c-file", sim_args.c_file, "True Kossakowski matrix JSON")->required();
  sim->add_option("--g", sim_args.g, "Dimensionless coupling")->required();
  sim->add_option("--phase", sim_args.phase, "Reflected-side phase 2kx");
  sim->add_option("--shots", sim_args.shots, "Shots per channel")->required();
  sim->add_option("--exposure", sim_args.exposure, "Dimensionless exposure time")->required();
  sim->add_option("--calibration", sim_args.calibration, "Detection efficiency")->required();
  sim->add_option("--out", sim_args.out_dir, "Directory for run.json and run.csv")->required();

  double demo_g = 2.0;
  auto* demo = app.add_subcommand("demo-negative", "The diag(1, 1, -1) counterexample");
  demo->add_option("--g", demo_g, "Dimensionless coupling")->capture_default_str();

  int trials = 100;
  std::optional<std::string> oracle_out;
  auto* orc = app.add_subcommand("oracle", "Closed forms against brute force");
  orc->add_option("--trials", trials, "Random matrices per check")->capture_default_str();
  orc->add_option("--out", oracle_out, "Also write the report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    globals.format = output == "csv" ? Format::csv : output == "text" ? Format::text : Format::json;
    globals.seed = seed;
    globals.tolerance = tolerance;
    if (!globals.tolerance) {
      if (const char* env = std::getenv("KOSSPROBE_TOLERANCE"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (*end != '\0') throw InputError("KOSSPROBE_TOLERANCE is not a number");
        globals.tolerance = v;
      }
    }
    if (globals.tolerance && !(*globals.tolerance > 0.0 && std::isfinite(*globals.tolerance))) {
      throw InputError("tolerance must be positive and finite");
    }

    Ctx ctx{globals, out, err};
    if (coeffs->parsed()) return cmd_coeffs(ctx, coeffs_args);
    if (fwd->parsed()) return cmd_forward(ctx, forward_args);
    if (build->parsed()) return cmd_build_matrix(ctx, build_args);
    if (inv->parsed()) return cmd_invert(ctx, invert_args);
    if (cp->parsed()) return cmd_cp_check(ctx, cp_file);
    if (sim->parsed()) return cmd_simulate(ctx, sim_args);
    if (demo->parsed()) return cmd_demo(ctx, demo_g);
    if (orc->parsed()) return cmd_oracle(ctx, trials, oracle_out);
    err << "error: no subcommand\n";
    return kExitInput;
  } catch (const NumericalRefusal& e) {
    err << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace kossprobe::cli
