// Copyright 2026 The stellar-witness Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "json_io.hpp"
#include "stellar/errors.hpp"

namespace {

namespace fs = std::filesystem;
using stellar::io::Json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("stellar_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return stellar::cli::run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  static std::string slurp(const std::string& p) { return stellar::io::read_file(p); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST(Format, Doubles) {
  EXPECT_EQ(stellar::io::format_double(1.0), "1.0");
  EXPECT_EQ(stellar::io::format_double(-0.0), "0.0");
  EXPECT_EQ(stellar::io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(stellar::io::format_double(1e+20), "1e+20");
  EXPECT_EQ(std::stod(stellar::io::format_double(std::numbers::pi)), std::numbers::pi);
  EXPECT_THROW(stellar::io::format_double(NAN), stellar::NumericError);
}

TEST(Format, StateRoundTrip) {
  stellar::FockVector psi;
  psi.amplitudes = {{0.6, 0.0}, {0.0, 0.8}};
  const Json j = stellar::io::state_to_json(psi);
  const auto back = std::get<stellar::FockVector>(stellar::io::state_from_json(j));
  EXPECT_EQ(back.amplitudes, psi.amplitudes);
  EXPECT_EQ(stellar::io::dump(stellar::io::state_to_json(back)), stellar::io::dump(j));

  const auto rho = std::get<stellar::FockDensity>(stellar::io::state_from_json(stellar::io::state_to_json(stellar::to_density(psi))));
  EXPECT_NEAR(rho.matrix(1, 0).imag(), 0.48, 1e-15);

  const Json probs = stellar::io::parse(R"({"kind": "fock_probabilities", "cutoff": 2, "data": [0.2, 0.8, 0.0]})", "t");
  const auto diag = std::get<stellar::FockDensity>(stellar::io::state_from_json(probs));
  EXPECT_EQ(diag.matrix(1, 1), stellar::Complex(0.8));

  const Json short_data = stellar::io::parse(R"({"kind": "fock_vector", "cutoff": 3, "data": [[1, 0]]})", "t");
  EXPECT_THROW(stellar::io::state_from_json(short_data), stellar::DataError);
}

TEST_F(Cli, ThresholdFileAndRecheck) {
  const auto w = write("w.json", R"({"type": "fock_pair", "j": 0, "k": 2, "omega": 0.0})");
  ASSERT_EQ(run({"threshold", "--witness", w, "--rank", "1", "--out", path("r.json")}), 0) << err_.str();
  const std::string text = slurp(path("r.json"));
  EXPECT_NE(text.find("\"value\": 1.0,"), std::string::npos);
  EXPECT_NE(text.find("\"seed\": "), std::string::npos);
  EXPECT_EQ(run({"threshold", "--recheck", path("r.json"), "--threads", "3"}), 0) << err_.str();

  std::string tampered = text;
  tampered.replace(tampered.find("\"value\": 1.0"), 12, "\"value\": 0.9");
  write("t.json", tampered);
  EXPECT_EQ(run({"threshold", "--recheck", path("t.json")}), 3);
}

TEST_F(Cli, CatThresholdHasDiagnostics) {
  const auto w = write("w.json", R"({"type": "cat_pair", "beta": [2.0, 0.0], "omega": 1.5707963267948966})");
  ASSERT_EQ(run({"threshold", "--witness", w, "--rank", "1", "--starts", "40"}), 0) << err_.str();
  const Json r = stellar::io::parse(out_.str(), "stdout");
  EXPECT_GT(r["value"].get<double>(), 0.0);
  EXPECT_LT(r["value"].get<double>(), 1.0);
  EXPECT_EQ(r["diagnostics"]["starts"].get<int>(), 40);
  EXPECT_TRUE(r["diagnostics"].contains("converged_starts"));
}

TEST_F(Cli, MultimodeThreshold) {
  const auto w = write("w.json", R"({"type": "fock_projector", "modes": 2, "occupation": [0, 0]})");
  ASSERT_EQ(run({"threshold", "--witness", w, "--rank", "1", "--starts", "20", "--out", path("r.json")}), 0) << err_.str();
  const Json r = stellar::io::parse(slurp(path("r.json")), "r");
  EXPECT_NEAR(r["value"].get<double>(), 1.0, 1e-5);
  EXPECT_EQ(run({"threshold", "--recheck", path("r.json")}), 0) << err_.str();
}

TEST_F(Cli, MalformedInputExitsOne) {
  EXPECT_EQ(run({"threshold", "--witness", path("missing.json")}), 1);

  const auto bad = write("bad.json", "{\"type\": \"fock_pair\",\n  \"j\": 0,\n  \"k\" 2}");
  EXPECT_EQ(run({"threshold", "--witness", bad, "--out", path("r.json")}), 1);
  EXPECT_NE(err_.str().find("bad.json:3:"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("r.json")));

  const auto field = write("field.json", R"({"type": "fock_pair", "j": 0, "k": 2})");
  EXPECT_EQ(run({"threshold", "--witness", field}), 1);
  EXPECT_NE(err_.str().find("witness.omega"), std::string::npos) << err_.str();

  const auto kind = write("kind.json", R"({"type": "terms", "terms": [{"weight": 1.0, "state": {"kind": "wavefunction", "cutoff": 0, "data": [1.0]}}]})");
  EXPECT_EQ(run({"threshold", "--witness", kind}), 1);
  EXPECT_NE(err_.str().find("witness.terms[0].state.kind"), std::string::npos) << err_.str();

  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"threshold", "--rank", "0", "--witness", field}), 1);
}

TEST_F(Cli, OptimizerFailureExitsTwo) {
  const auto w = write("w.json", R"({"type": "cat_pair", "beta": [2.0, 0.0], "omega": 1.0})");
  const auto cfg = write("cfg.json", R"({"starts": 2, "max_iterations": 2})");
  EXPECT_EQ(run({"threshold", "--witness", w, "--rank", "2", "--config", cfg, "--out", path("r.json")}), 2);
  EXPECT_FALSE(fs::exists(path("r.json")));
  const auto unknown = write("unknown.json", R"({"starts": 2, "speed": "fast"})");
  EXPECT_EQ(run({"threshold", "--witness", w, "--config", unknown}), 1);
}

TEST_F(Cli, BoundaryFilesAndRecheck) {
  const std::string out = path("fock");
  ASSERT_EQ(run({"boundary", "--family", "fock_pair", "--j", "0", "--k", "2", "--ranks", "1..3", "--omegas", "4",
                 "--starts", "30", "--out", out}), 0) << err_.str();
  std::istringstream csv(slurp(out + "/boundary.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "omega,rank,p_first,p_second,threshold,on_hull,flagged");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 12);
  for (int n = 1; n <= 3; ++n) EXPECT_TRUE(fs::exists(out + "/hull_rank_" + std::to_string(n) + ".json"));
  const Json hull = stellar::io::parse(slurp(out + "/hull_rank_1.json"), "hull");
  EXPECT_EQ(hull["rank"].get<int>(), 1);
  EXPECT_GE(hull["vertices"].size(), 3u);

  EXPECT_EQ(run({"boundary", "--recheck", out, "--threads", "2"}), 0) << err_.str();
  std::ofstream(out + "/hull_rank_2.json", std::ios::app) << " ";
  EXPECT_EQ(run({"boundary", "--recheck", out}), 3);
  EXPECT_NE(out_.str().find("hull_rank_2.json"), std::string::npos);
}

TEST_F(Cli, BoundaryEdgeCases) {
  ASSERT_EQ(run({"boundary", "--family", "fock_pair", "--ranks", "1", "--omegas", "1", "--starts", "10", "--out", path("one")}), 0);
  const Json hull = stellar::io::parse(slurp(path("one") + "/hull_rank_1.json"), "hull");
  EXPECT_EQ(hull["vertices"].size(), 1u);

  EXPECT_EQ(run({"boundary", "--family", "squeezed_pair", "--out", path("bad")}), 1);
  EXPECT_FALSE(fs::exists(path("bad")));
  EXPECT_EQ(run({"boundary", "--family", "fock_pair", "--j", "1", "--k", "1", "--out", path("bad")}), 1);
  EXPECT_EQ(run({"boundary", "--family", "fock_pair", "--ranks", "2..1", "--out", path("bad")}), 1);
  EXPECT_FALSE(fs::exists(path("bad")));
}

TEST_F(Cli, CertifyAgainstCurves) {
  const std::string out = path("cat");
  ASSERT_EQ(run({"boundary", "--family", "cat_pair", "--beta", "2", "--ranks", "1..2", "--omegas", "16", "--starts", "40",
                 "--out", out}), 0) << err_.str();
  // The coherent state |2> itself: (p_odd, p_even) = e^{-4} (sinh 4, cosh 4).
  const std::string odd = stellar::io::format_double(std::exp(-4.0) * std::sinh(4.0));
  const std::string even = stellar::io::format_double(std::exp(-4.0) * std::cosh(4.0));
  ASSERT_EQ(run({"certify", "--pair", odd, even, "--curves", out}), 0) << err_.str();
  EXPECT_EQ(stellar::io::parse(out_.str(), "report")["certified_rank"].get<int>(), 0);

  ASSERT_EQ(run({"certify", "--pair", "0", "1", "--curves", out}), 0) << err_.str();
  const Json report = stellar::io::parse(out_.str(), "report");
  EXPECT_EQ(report["certified_rank"].get<int>(), 2);
  EXPECT_GT(report["witness_value"].get<double>(), report["threshold"].get<double>());
  EXPECT_GT(report["trace_distance_lower_bound"].get<double>(), 0.0);
  EXPECT_TRUE(report.contains("separating_omega"));

  // Shrinking the rank-2 region below the rank-1 one breaks nesting.
  std::istringstream csv(slurp(out + "/boundary.csv"));
  std::ostringstream edited;
  std::string line;
  std::getline(csv, line);
  edited << line << "\n";
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells[1] == "2") cells[4] = stellar::io::format_double(std::stod(cells[4]) - 0.1);
    for (std::size_t i = 0; i < cells.size(); ++i) edited << (i ? "," : "") << cells[i];
    edited << "\n";
  }
  std::ofstream(out + "/boundary.csv") << edited.str();
  EXPECT_EQ(run({"certify", "--pair", "0", "1", "--curves", out}), 1);
}

TEST_F(Cli, CertifyStateWithWitness) {
  const auto one = write("one.json", R"({"kind": "fock_probabilities", "cutoff": 2, "data": [0.0, 1.0, 0.0]})");
  const auto cat = write("cat.json", R"({"type": "cat_pair", "beta": [0.01, 0.0], "omega": 0.0})");
  ASSERT_EQ(run({"certify", "--state", one, "--witness", cat, "--rank", "1", "--starts", "40"}), 0) << err_.str();
  Json report = stellar::io::parse(out_.str(), "report");
  EXPECT_GE(report["certified_rank"].get<int>(), 1);
  EXPECT_GT(report["trace_distance_lower_bound"].get<double>(), 0.5);

  const auto vac = write("vac.json", R"({"kind": "fock_vector", "cutoff": 0, "data": [[1.0, 0.0]]})");
  const auto w1 = write("w1.json", R"({"type": "fock_diagonal", "weights": [0.0, 1.0]})");
  ASSERT_EQ(run({"certify", "--state", vac, "--witness", w1, "--rank", "2", "--starts", "40"}), 0) << err_.str();
  report = stellar::io::parse(out_.str(), "report");
  EXPECT_EQ(report["certified_rank"].get<int>(), 0);
  EXPECT_EQ(report["trace_distance_lower_bound"].get<double>(), 0.0);

  EXPECT_EQ(run({"certify", "--state", vac}), 1);
  EXPECT_EQ(run({"certify", "--state", vac, "--pair", "0", "1", "--witness", w1, "--rank", "1"}), 1);
}

TEST_F(Cli, ValidateSuites) {
  for (const char* suite : {"elements", "states", "hull"}) {
    ASSERT_EQ(run({"validate", "--suite", suite, "--seed", "7", "--out", path("v.json")}), 0) << err_.str();
    const Json report = stellar::io::parse(slurp(path("v.json")), "v");
    EXPECT_TRUE(report["passed"].get<bool>());
    for (const Json& check : report["checks"])
      EXPECT_LE(check["max_deviation"].get<double>(), check["tolerance"].get<double>());
  }
  EXPECT_EQ(run({"validate", "--suite", "nonsense"}), 1);
}

TEST_F(Cli, GaussianElements) {
  ASSERT_EQ(run({"gaussian-elements", "--r", "0.5", "--rows", "2", "--cols", "1"}), 0) << err_.str();
  const Json j = stellar::io::parse(out_.str(), "elements");
  const double m00 = j["matrix"][0][0][0].get<double>();
  EXPECT_NEAR(m00, 1.0 / std::sqrt(std::cosh(0.5)), 1e-15);
  EXPECT_EQ(j["matrix"][1][0][0].get<double>(), 0.0);
  EXPECT_EQ(run({"gaussian-elements", "--r", "-1"}), 1);
}

}  // namespace
