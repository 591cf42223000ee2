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

#include "kossprobe/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "kossprobe/errors.hpp"

namespace kossprobe::io {

namespace {

json header(const char* kind) { return json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const Vector6d& v) {
  json out = json::array();
  for (int k = 0; k < 6; ++k) out.push_back(v(k));
  return out;
}

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse number '" + s + "'");
  }
}

int channel_index(const std::string& label) {
  for (int k = 0; k < 6; ++k)
    if (label == kChannelLabels[k]) return k;
  throw InputError("unknown channel label '" + label + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_pair(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw InputError("matrix must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError("matrix rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& z = row.at(c);
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw InputError("matrix entries must be [re, im] pairs");
      }
      m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

json real_matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_or_null(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const KossakowskiMatrix& c) {
  json out = json::object();
  const Vector6d v = c.as_vector();
  for (int k = 0; k < 6; ++k) out[kParameterNames[k]] = v(k);
  return out;
}

KossakowskiMatrix kossakowski_from_json(const json& j) {
  const json& body = j.is_object() && j.contains("kossakowski") ? j.at("kossakowski") : j;
  if (body.is_array()) {
    if (body.size() != 3) throw InputError("Kossakowski matrix must be 3x3");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
      const json& row = body.at(r);
      if (!row.is_array() || row.size() != 3) throw InputError("Kossakowski matrix must be 3x3");
      for (int c = 0; c < 3; ++c) {
        if (!row.at(c).is_number()) throw InputError("Kossakowski entries must be numbers");
        m(r, c) = row.at(c).get<double>();
      }
    }
    if (!m.allFinite()) throw InputError("Kossakowski entries must be finite");
    return KossakowskiMatrix::from_matrix(m);
  }
  if (!body.is_object()) throw InputError("Kossakowski matrix must be a JSON object or 3x3 array");
  Vector6d v;
  for (int k = 0; k < 6; ++k) v(k) = get_field<double>(body, kParameterNames[k]);
  if (!v.allFinite()) throw InputError("Kossakowski entries must be finite");
  return KossakowskiMatrix::from_vector(v);
}

json to_json(const CpReport& r) {
  json out = header("cp_report");
  out["psd"] = r.psd;
  out["verdict"] = r.psd ? "completely positive" : "not completely positive";
  out["min_eigenvalue"] = r.min_eigenvalue;
  out["eigenvalues"] = {r.eigenvalues(0), r.eigenvalues(1), r.eigenvalues(2)};
  out["tolerance"] = r.tolerance;
  out["minors_satisfied"] = r.minors_satisfied();
  json conds = json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"name", c.name}, {"margin", c.margin}, {"satisfied", c.satisfied}});
  }
  out["conditions"] = conds;
  return out;
}

json to_json(const ScatteringCoefficients& c) {
  json out = header("scattering_coefficients");
  out["g"] = c.g;
  out["t0"] = complex_pair(c.t0);
  out["t1"] = complex_pair(c.t1);
  out["r0"] = complex_pair(c.r0);
  out["r1"] = complex_pair(c.r1);
  out["transmission_probability"] = {std::norm(c.t0), std::norm(c.t1)};
  out["reflection_probability"] = {std::norm(c.r0), std::norm(c.r1)};
  return out;
}

json to_json(const ProbeResult& r) {
  json out = header("probe_rates");
  out["g"] = r.g;
  out["phase"] = r.phase;
  out["canonical_phase"] = r.canonical_phase;
  out["labels"] = kChannelLabels;
  out["rates"] = vector_to_json(r.rates);
  return out;
}

json to_json(const ProbeMatrix& m) {
  json out = header("probe_matrix");
  out["source"] = std::string(to_string(m.source));
  out["g"] = m.g;
  out["phase"] = m.phase;
  out["det"] = m.det;
  out["condition_number"] = number_or_null(m.condition_number);
  out["columns"] = kParameterNames;
  out["rows"] = kChannelLabels;
  out["matrix"] = real_matrix_to_json(m.m);
  return out;
}

json to_json(const MatrixDeviation& d) {
  json out = json::object();
  out["max_abs"] = d.max_abs;
  json entries = json::array();
  for (const auto& e : d.entries) {
    entries.push_back({{"row", kChannelLabels[e.row]},
                       {"column", kParameterNames[e.col]},
                       {"reference", e.reference},
                       {"candidate", e.candidate}});
  }
  out["entries"] = entries;
  return out;
}

json to_json(const InversionResult& r) {
  json out = header("inversion_result");
  out["c_hat"] = to_json(r.c_hat);
  out["standard_errors"] = vector_to_json(r.standard_errors());
  out["covariance"] = real_matrix_to_json(r.covariance);
  out["residual_norm"] = r.residual_norm;
  out["verdict"] = std::string(to_string(r.verdict));
  out["margin"] = r.margin;
  out["margin_sigma"] = r.margin_sigma;
  out["condition_number"] = number_or_null(r.condition_number);
  out["cp_diagnostics"] = to_json(r.diagnostics);
  return out;
}

json to_json(const ExperimentConfig& c) {
  return {{"true_c", to_json(c.true_c)},
          {"g", c.g},
          {"phase", c.phase},
          {"exposure", c.exposure},
          {"calibration", c.calibration},
          {"shots_per_channel", c.shots_per_channel},
          {"seed", c.seed}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  if (!j.contains("true_c")) throw InputError("missing field 'true_c'");
  c.true_c = kossakowski_from_json(j.at("true_c"));
  c.g = get_field<double>(j, "g");
  c.phase = get_field<double>(j, "phase");
  c.exposure = get_field<double>(j, "exposure");
  c.calibration = get_field<double>(j, "calibration");
  c.shots_per_channel = get_field<std::uint64_t>(j, "shots_per_channel");
  c.seed = get_field<std::uint64_t>(j, "seed");
  return c;
}

json to_json(const ExperimentRun& r) {
  json out = header("experiment_run");
  out["config"] = to_json(r.config);
  out["config_hash"] = r.config_hash;
  out["timestamp"] = r.timestamp ? json(*r.timestamp) : json(nullptr);
  out["unphysical_rate_channels"] = r.unphysical_channels();
  json channels = json::array();
  for (const auto& ch : r.channels) {
    channels.push_back({{"label", ch.label},
                        {"trials", ch.trials},
                        {"detections", ch.detections},
                        {"p_hat", ch.p_hat()},
                        {"sigma", ch.sigma()},
                        {"model_rate", ch.model_rate},
                        {"probability", ch.probability},
                        {"clamped", ch.clamped}});
  }
  out["channels"] = channels;
  return out;
}

ExperimentRun experiment_run_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "experiment_run") {
    throw InputError("not an experiment_run document");
  }
  ExperimentRun r;
  r.config = experiment_config_from_json(j.at("config"));
  r.config_hash = get_field<std::string>(j, "config_hash");
  if (j.contains("timestamp") && j.at("timestamp").is_string()) {
    r.timestamp = j.at("timestamp").get<std::string>();
  }
  const json& channels = j.at("channels");
  if (!channels.is_array() || channels.size() != 6) {
    throw InputError("experiment run must have six channels");
  }
  for (const auto& ch : channels) {
    const int k = channel_index(get_field<std::string>(ch, "label"));
    auto& rec = r.channels[k];
    rec.label = kChannelLabels[k];
    rec.trials = get_field<std::uint64_t>(ch, "trials");
    rec.detections = get_field<std::uint64_t>(ch, "detections");
    rec.model_rate = get_field<double>(ch, "model_rate");
    rec.probability = get_field<double>(ch, "probability");
    rec.clamped = get_field<bool>(ch, "clamped");
    if (rec.detections > rec.trials) throw InputError("detections exceed trials");
  }
  if (r.config_hash != config_hash(r.config)) {
    throw InputError("experiment run config_hash does not match its config");
  }
  return r;
}

std::string run_to_csv(const ExperimentRun& r) {
  std::string out = "label,N,k,p_hat,sigma\n";
  for (const auto& ch : r.channels) {
    out += ch.label + "," + std::to_string(ch.trials) + "," + std::to_string(ch.detections) +
           "," + format_double(ch.p_hat()) + "," + format_double(ch.sigma()) + "\n";
  }
  return out;
}

std::string rates_to_csv(const RateTable& t) {
  std::string out = t.sigmas ? "label,rate,sigma\n" : "label,rate\n";
  for (int k = 0; k < 6; ++k) {
    out += std::string(kChannelLabels[k]) + "," + format_double(t.rates(k));
    if (t.sigmas) out += "," + format_double((*t.sigmas)(k));
    out += "\n";
  }
  return out;
}

RateTable rate_table_from_csv(const std::string& text, std::optional<double> rate_scale) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    columns = split(line, ',');
    break;
  }
  const bool run_csv = columns == std::vector<std::string>{"label", "N", "k", "p_hat", "sigma"};
  const bool rate_csv = columns == std::vector<std::string>{"label", "rate"} ||
                        columns == std::vector<std::string>{"label", "rate", "sigma"};
  if (!run_csv && !rate_csv) {
    throw InputError("unrecognised CSV header; expected 'label,rate[,sigma]' or "
                     "'label,N,k,p_hat,sigma'");
  }
  if (run_csv && !rate_scale) {
    throw InputError("run CSV needs the exposure and calibration to convert p_hat to rates");
  }
  const bool has_sigma = run_csv || columns.size() == 3;

  RateTable table;
  Vector6d sigmas = Vector6d::Zero();
  std::array<bool, 6> seen{};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    if (cells.size() != columns.size()) throw InputError("CSV row has the wrong number of cells");
    const int k = channel_index(cells[0]);
    if (seen[k]) throw InputError("duplicate channel " + cells[0]);
    seen[k] = true;
    if (run_csv) {
      table.rates(k) = parse_double(cells[3]) / *rate_scale;
      sigmas(k) = parse_double(cells[4]) / *rate_scale;
    } else {
      table.rates(k) = parse_double(cells[1]);
      if (has_sigma) sigmas(k) = parse_double(cells[2]);
    }
  }
  for (int k = 0; k < 6; ++k) {
    if (!seen[k]) throw InputError(std::string("CSV is missing channel ") + kChannelLabels[k]);
  }
  if (has_sigma) table.sigmas = sigmas;
  return table;
}

json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace kossprobe::io
