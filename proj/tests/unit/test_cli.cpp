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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "kossprobe/serialization.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json payload() const { return json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kossprobe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = kossprobe::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("kossprobe-cli-" + std::to_string(std::rand()) + "-" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

void write(const std::string& path, const std::string& text) {
  kossprobe::io::write_text_file(path, text);
}

const char* kIdentity = R"({"c11": 1, "c12": 0, "c13": 0, "c22": 1, "c23": 0, "c33": 1})";

}  // namespace

TEST_CASE("coeffs at zero coupling") {
  const Result r = cli({"coeffs", "--g", "0"});
  REQUIRE(r.code == 0);
  const json j = r.payload();
  CHECK(j["t0"] == json::array({1.0, 0.0}));
  CHECK(j["t1"] == json::array({1.0, 0.0}));
  CHECK(j["r0"] == json::array({0.0, 0.0}));
  CHECK(j["r1"] == json::array({0.0, 0.0}));
}

TEST_CASE("coeffs input validation") {
  CHECK(cli({"coeffs"}).code == 2);
  CHECK(cli({"coeffs", "--J", "1", "--E", "2"}).code == 2);
  CHECK(cli({"coeffs", "--J", "1", "--E", "-2", "--mass", "1", "--hbar", "1"}).code == 2);
  CHECK(cli({"coeffs", "--g", "abc"}).code == 2);
  const Result sweep = cli({"coeffs", "--g", "0", "--g-to", "1", "--steps", "4", "--output", "csv"});
  CHECK(sweep.code == 0);
  CHECK(sweep.out.rfind("g,t0_re,t0_im,t1_re,t1_im,r0_re,r0_im,r1_re,r1_im,T0,T1\n", 0) == 0);
  CHECK(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 6);
}

TEST_CASE("demo-negative reports the negative rate") {
  const Result r = cli({"demo-negative", "--g", "2"});
  REQUIRE(r.code == 0);
  const json j = r.payload();
  CHECK(j["transmitted_rate"].get<double>() == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(j["verdict"] == "not completely positive");
  CHECK(j["bloch_positivity"]["positive"] == true);
  CHECK(j["lifted_psi3"]["positive"] == false);
  CHECK(cli({"demo-negative", "--g", "0"}).code == 2);
}

TEST_CASE("simulate is byte-identical for a fixed seed") {
  TempDir dir;
  write(dir.file("c.json"), kIdentity);
  const std::vector<std::string> common = {"simulate", "--c-file", dir.file("c.json"), "--g", "2",
                                           "--shots", "100000", "--exposure", "0.01",
                                           "--calibration", "1", "--seed", "7", "--out"};
  auto a = common, b = common;
  a.push_back(dir.file("a"));
  b.push_back(dir.file("b"));
  const Result ra = cli(a), rb = cli(b);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out == rb.out);
  for (const char* name : {"run.json", "run.csv"}) {
    CHECK(kossprobe::io::read_text_file(dir.file(std::string("a/") + name)) ==
          kossprobe::io::read_text_file(dir.file(std::string("b/") + name)));
  }
  CHECK(kossprobe::io::read_text_file(dir.file("a/run.csv")).rfind("label,N,k,p_hat,sigma\n", 0) ==
        0);
}

TEST_CASE("simulate requires a seed and valid config") {
  TempDir dir;
  write(dir.file("c.json"), kIdentity);
  CHECK(cli({"simulate", "--c-file", dir.file("c.json"), "--g", "2", "--shots", "10",
             "--exposure", "0.01", "--calibration", "1", "--out", dir.file("x")})
            .code == 2);
  CHECK(cli({"simulate", "--c-file", dir.file("c.json"), "--g", "2", "--shots", "10",
             "--exposure", "0.5", "--calibration", "1", "--seed", "1", "--out", dir.file("x")})
            .code == 2);
}

TEST_CASE("simulate -> invert -> cp-check pipeline") {
  TempDir dir;
  write(dir.file("c.json"), kIdentity);
  REQUIRE(cli({"simulate", "--c-file", dir.file("c.json"), "--g", "2", "--shots", "1000000",
               "--exposure", "0.01", "--calibration", "1", "--seed", "11", "--out", dir.file("run")})
              .code == 0);

  const Result inv = cli({"invert", "--rates", dir.file("run/run.json"), "--g", "2",
                          "--project-psd", "--bootstrap", "200"});
  REQUIRE(inv.code == 0);
  const json j = inv.payload();
  CHECK(j["kind"] == "inversion_result");
  CHECK((j["verdict"] == "CP" || j["verdict"] == "indeterminate"));
  CHECK(j["cp_diagnostics"]["conditions"].size() == 7);
  CHECK(j.contains("c_psd"));
  write(dir.file("chat.json"), j["c_hat"].dump());
  const Result cp = cli({"cp-check", "--c-file", dir.file("chat.json")});
  CHECK(cp.code == 0);
  CHECK(cp.payload()["eigenvalues"].size() == 3);

  // The CSV form needs the exposure to turn p_hat into rates.
  CHECK(cli({"invert", "--rates", dir.file("run/run.csv"), "--g", "2"}).code == 2);
  const Result csv = cli({"invert", "--rates", dir.file("run/run.csv"), "--g", "2", "--exposure",
                          "0.01", "--calibration", "1", "--bootstrap", "200"});
  REQUIRE(csv.code == 0);
  CHECK(csv.payload()["c_hat"] == j["c_hat"]);
  // A run recorded at another coupling is rejected.
  CHECK(cli({"invert", "--rates", dir.file("run/run.json"), "--g", "3"}).code == 2);
}

TEST_CASE("forward output feeds invert") {
  TempDir dir;
  write(dir.file("c.json"), R"([[0.9, 0.2, -0.3], [0.2, 0.7, 0.15], [-0.3, 0.15, 0.5]])");
  const Result fwd = cli({"forward", "--c-file", dir.file("c.json"), "--g", "1.5"});
  REQUIRE(fwd.code == 0);
  CHECK(fwd.payload()["kind"] == "probe_rates");
  write(dir.file("rates.json"), fwd.out);
  const Result inv = cli({"invert", "--rates", dir.file("rates.json"), "--g", "1.5"});
  REQUIRE(inv.code == 0);
  const json c = inv.payload()["c_hat"];
  CHECK(c["c12"].get<double>() == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(c["c33"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));

  const Result csv = cli({"forward", "--c-file", dir.file("c.json"), "--g", "1.5", "--output", "csv"});
  write(dir.file("rates.csv"), csv.out);
  write(dir.file("sigmas.csv"), "label,sigma\nP0T,0.01\nP1T,0.01\nP2T,0.01\nP0R,0.01\nP1R,0.01\nP2R,0.01\n");
  const Result with_sig = cli({"invert", "--rates", dir.file("rates.csv"), "--g", "1.5",
                               "--sigmas", dir.file("sigmas.csv"), "--bootstrap", "100"});
  REQUIRE(with_sig.code == 0);
  CHECK(with_sig.payload()["standard_errors"][0].get<double>() > 0.0);
}

TEST_CASE("singular matrix exits with 3") {
  TempDir dir;
  write(dir.file("c.json"), kIdentity);
  const Result fwd = cli({"forward", "--c-file", dir.file("c.json"), "--g", "0"});
  write(dir.file("rates.json"), fwd.out);
  const Result r = cli({"invert", "--rates", dir.file("rates.json"), "--g", "0"});
  CHECK(r.code == 3);
  CHECK(r.err.find("singular") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("build-matrix sources") {
  const Result both = cli({"build-matrix", "--g", "2", "--source", "both"});
  REQUIRE(both.code == 0);
  const json j = both.payload();
  CHECK(j["deviation"]["entries"].size() == 10);
  CHECK(j["appendix"]["det"].get<double>() == doctest::Approx(10.7952));
  CHECK(cli({"build-matrix", "--g", "2", "--source", "appendix", "--phase", "1"}).code == 2);
  CHECK(cli({"build-matrix", "--g", "2", "--source", "nope"}).code == 2);
  const Result csv = cli({"build-matrix", "--g", "2", "--output", "csv"});
  CHECK(csv.out.rfind("source,row,c11,c12,c13,c22,c23,c33\nprogrammatic,P0T,", 0) == 0);
}

TEST_CASE("oracle exits 4 beyond tolerance") {
  const Result ok = cli({"oracle", "--trials", "5"});
  CHECK(ok.code == 0);
  CHECK(ok.payload()["passed"] == true);
  CHECK(cli({"oracle", "--trials", "5", "--tolerance", "1e-30"}).code == 4);
}

TEST_CASE("tolerance precedence") {
  TempDir dir;
  // lambda_min = -1e-8
  write(dir.file("c.json"), R"({"c11": 1, "c12": 0, "c13": 0, "c22": 1, "c23": 0, "c33": -1e-8})");
  const std::string f = dir.file("c.json");
  CHECK(cli({"cp-check", "--c-file", f}).payload()["psd"] == false);
  CHECK(cli({"cp-check", "--c-file", f, "--tolerance", "1e-6"}).payload()["psd"] == true);
  ::setenv("KOSSPROBE_TOLERANCE", "1e-6", 1);
  CHECK(cli({"cp-check", "--c-file", f}).payload()["psd"] == true);
  CHECK(cli({"--tolerance", "1e-12", "cp-check", "--c-file", f}).payload()["psd"] == false);
  ::setenv("KOSSPROBE_TOLERANCE", "-1", 1);
  CHECK(cli({"cp-check", "--c-file", f}).code == 2);
  ::unsetenv("KOSSPROBE_TOLERANCE");
}

TEST_CASE("parse errors and unknown flags exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"forward", "--g", "2"}).code == 2);
  CHECK(cli({"coeffs", "--g", "1", "--bogus"}).code == 2);
  CHECK(cli({"cp-check", "--c-file", "/nonexistent/c.json"}).code == 2);
  CHECK(cli({"--output", "yaml", "coeffs", "--g", "1"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("json payloads parse back into library types") {
  TempDir dir;
  write(dir.file("c.json"), kIdentity);
  const Result cp = cli({"cp-check", "--c-file", dir.file("c.json")});
  const json j = cp.payload();
  CHECK(j["schema_version"] == 1);
  CHECK(kossprobe::io::kossakowski_from_json(j["c"]) == kossprobe::KossakowskiMatrix::identity());
  REQUIRE(cli({"simulate", "--c-file", dir.file("c.json"), "--g", "2", "--shots", "100",
               "--exposure", "0.01", "--calibration", "1", "--seed", "5", "--out", dir.file("r")})
              .code == 0);
  const Result sim = cli({"simulate", "--c-file", dir.file("c.json"), "--g", "2", "--shots", "100",
                          "--exposure", "0.01", "--calibration", "1", "--seed", "5", "--out",
                          dir.file("r")});
  CHECK_NOTHROW(kossprobe::io::experiment_run_from_json(sim.payload()));
}
