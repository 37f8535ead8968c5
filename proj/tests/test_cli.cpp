// Copyright 2026 The mfland Authors. All Rights Reserved.
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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mfland/cli.hpp"
#include "mfland/core.hpp"
#include "mfland/random.hpp"
#include "support/test_util.hpp"

namespace mfland {
namespace {

using nlohmann::ordered_json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const RunConfig& config) {
  std::ostringstream out, err;
  const int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::scratch_dir(
        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    diag_ = testing::write_text(dir_ / "x.csv", "2,0,0\n0,1,0\n");
    Rng rng(7);
    std::ostringstream random;
    write_csv_matrix(random, random_gaussian(3, 4, rng));
    random_ = testing::write_text(dir_ / "r.csv", random.str());
    ragged_ = testing::write_text(dir_ / "ragged.csv", "1,2,3\n4,5\n");
  }

  RunConfig config(const std::string& command, const std::string& x) const {
    RunConfig c;
    c.command = command;
    c.x_path = x;
    return c;
  }

  std::filesystem::path dir_;
  std::string diag_, random_, ragged_;
};

TEST_F(CliTest, SpectrumReportOnDiagonalExample) {
  RunConfig c = config("spectrum", diag_);
  c.k = 1;
  c.select = "2";
  const Outcome o = invoke(c);
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const ordered_json j = ordered_json::parse(o.out);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_NEAR(j["lambda_min"].get<double>(), -1.0, 1e-12);
  EXPECT_EQ(j["inertia"], ordered_json::array({3, 1, 1}));
  ASSERT_EQ(j["eigenvalues"].size(), 5u);
  ASSERT_EQ(j["provenance"].size(), 5u);
  EXPECT_NEAR(j["oracle_lambda_min"].get<double>(), -1.0, 1e-10);
  EXPECT_EQ(j["selection"], ordered_json::array({2}));
}

TEST_F(CliTest, SpectrumFamiliesAndCsv) {
  RunConfig c = config("spectrum", diag_);
  const ordered_json zero = ordered_json::parse(invoke(c).out);
  EXPECT_EQ(zero["family"], "zero");
  EXPECT_NEAR(zero["lambda_min"].get<double>(), -2.0, 1e-12);

  c.select = "2";
  c.balanced = true;
  const ordered_json bal = ordered_json::parse(invoke(c).out);
  EXPECT_EQ(bal["family"], "balanced");
  EXPECT_NEAR(bal["lambda_min"].get<double>(), -1.0, 1e-10);

  c.balanced = false;
  c.scale = 2.0;
  const ordered_json scaled = ordered_json::parse(invoke(c).out);
  EXPECT_NEAR(scaled["lambda_min"].get<double>(), -0.61646, 1e-5);

  c.format = "csv";
  const Outcome csv = invoke(c);
  ASSERT_EQ(csv.code, kExitSuccess);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "value,provenance,coupling");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 6);
}

TEST_F(CliTest, ClassifyReportsDeficitIndex) {
  const std::string x = testing::write_text(dir_ / "x3.csv",
                                            "3,0,0,0\n0,2,0,0\n0,0,1,0\n");
  RunConfig c = config("classify", x);
  c.k = 2;
  c.select = "1,3";
  const ordered_json j = ordered_json::parse(invoke(c).out);
  EXPECT_EQ(j["kind"], "StrictSaddle");
  EXPECT_EQ(j["p"], 2);
  EXPECT_EQ(j["maximal"], false);
  EXPECT_NEAR(j["lambda_min_closed_form"].get<double>(),
              j["oracle_lambda_min"].get<double>(), 1e-10);

  c.select = "1,2";
  const ordered_json gm = ordered_json::parse(invoke(c).out);
  EXPECT_EQ(gm["kind"], "GlobalMinimum");
  EXPECT_TRUE(gm["p"].is_null());
  EXPECT_NEAR(gm["J"].get<double>(), 0.5, 1e-14);
}

TEST_F(CliTest, OrbitWithScaleAndGroupFile) {
  RunConfig c = config("orbit", diag_);
  c.select = "2";
  c.scale = 2.0;
  const ordered_json j = ordered_json::parse(invoke(c).out);
  EXPECT_NEAR(j["transported_bound"].get<double>(), -0.25, 1e-12);
  EXPECT_NEAR(j["lambda_min_transported"].get<double>(), -0.61646, 1e-5);
  EXPECT_EQ(j["bound_holds"], true);
  EXPECT_EQ(j["inertia_preserved"], true);

  c.group_path = testing::write_text(dir_ / "a.csv", "0.5\n");
  const ordered_json g = ordered_json::parse(invoke(c).out);
  EXPECT_NEAR(g["induced_norm"].get<double>(), 2.0, 1e-12);

  c.group_path = testing::write_text(dir_ / "bad.csv", "1,0\n0,1\n");
  EXPECT_EQ(invoke(c).code, kExitInputError);
  c.group_path = testing::write_text(dir_ / "zero.csv", "0\n");
  EXPECT_EQ(invoke(c).code, kExitInputError);
}

TEST_F(CliTest, FlowJsonAndCsv) {
  RunConfig c = config("flow", diag_);
  c.seed = 3;
  const Outcome o = invoke(c);
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const ordered_json j = ordered_json::parse(o.out);
  EXPECT_EQ(j["status"], "Converged");
  EXPECT_NEAR(j["J_final"].get<double>(), 0.5, 1e-6);
  EXPECT_EQ(j["diagnosis"]["kind"], "GlobalMinimum");

  c.format = "csv";
  const Outcome csv = invoke(c);
  ASSERT_EQ(csv.code, kExitSuccess);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "t,J,gradnorm,drift");
  EXPECT_EQ(ordered_json::parse(csv.err)["status"], "Converged");

  c.format = "json";
  c.init = "file";
  c.w0_path = testing::write_text(dir_ / "w0.csv", "1\n1\n");
  c.s0_path = testing::write_text(dir_ / "s0.csv", "1,1,1\n");
  EXPECT_EQ(invoke(c).code, kExitSuccess);
  c.s0_path = testing::write_text(dir_ / "s0bad.csv", "1,1\n");
  EXPECT_EQ(invoke(c).code, kExitInputError);
}

TEST_F(CliTest, VerifyPassesOnRandomMatrix) {
  RunConfig c = config("verify", random_);
  c.seed = 7;
  const Outcome o = invoke(c);
  EXPECT_EQ(o.code, kExitSuccess) << o.err;
  const ordered_json j = ordered_json::parse(o.out);
  EXPECT_EQ(j["passed"], true);
  EXPECT_GT(j["checks"].size(), 30u);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
  RunConfig ragged = config("spectrum", ragged_);
  ragged.select = "1";
  const Outcome o = invoke(ragged);
  EXPECT_EQ(o.code, kExitInputError);
  EXPECT_NE(o.err.find("ragged"), std::string::npos);

  EXPECT_EQ(invoke(config("spectrum", (dir_ / "missing.csv").string())).code,
            kExitInputError);

  RunConfig shape = config("spectrum", diag_);
  shape.c0_path = testing::write_text(dir_ / "c0.csv", "1,2\n");
  EXPECT_EQ(invoke(shape).code, kExitInputError);

  RunConfig sel = config("classify", diag_);
  sel.select = "3";
  EXPECT_EQ(invoke(sel).code, kExitInputError);

  RunConfig fmt = config("spectrum", diag_);
  fmt.format = "xml";
  EXPECT_EQ(invoke(fmt).code, kExitInputError);

  EXPECT_EQ(invoke(config("bogus", diag_)).code, kExitInputError);
}

TEST_F(CliTest, ReportsAreByteIdenticalAndWrittenToFile) {
  RunConfig c = config("verify", random_);
  c.seed = 11;
  const Outcome a = invoke(c);
  const Outcome b = invoke(c);
  EXPECT_EQ(a.out, b.out);

  c.out_path = (dir_ / "report.json").string();
  const Outcome f = invoke(c);
  EXPECT_TRUE(f.out.empty());
  std::ifstream in(c.out_path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  EXPECT_EQ(buffer.str(), a.out);
}

TEST(RunConfigSerialization, RoundTrip) {
  RunConfig c;
  c.command = "orbit";
  c.x_path = "x.csv";
  c.k = 3;
  c.select = "1,3";
  c.c0_path = "c0.csv";
  c.scale = 0.1;
  c.group_path = "a.csv";
  c.balanced = true;
  c.seed = 18446744073709551615ull;
  c.rank_tol = 1e-9;
  c.crit_tol = 3e-7;
  c.inertia_tol = 1e-7;
  c.grad_tol = 1e-11;
  c.t_max = 123.5;
  c.init = "gaussian";
  c.init_scale = 0.3;
  c.w0_path = "w.csv";
  c.s0_path = "s.csv";
  c.format = "csv";
  c.out_path = "o.csv";
  const std::string text = dump_json(to_json(c));
  const RunConfig back = run_config_from_json(ordered_json::parse(text));
  EXPECT_EQ(dump_json(to_json(back)), text);
  EXPECT_EQ(back.select, c.select);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.scale, c.scale);

  const RunConfig defaults = run_config_from_json(ordered_json::object());
  EXPECT_EQ(dump_json(to_json(defaults)), dump_json(to_json(RunConfig{})));
  EXPECT_THROW(run_config_from_json(ordered_json::parse(R"({"k": "two"})")),
               InvalidInput);
}

TEST(JsonDump, SeventeenSignificantDigits) {
  ordered_json j;
  j["x"] = 0.1;
  j["n"] = 3;
  j["nan"] = std::numeric_limits<double>::quiet_NaN();
  j["s"] = "a\"b";
  EXPECT_EQ(dump_json(j, -1),
            R"({"x":0.10000000000000001,"n":3,"nan":null,"s":"a\"b"})");
  EXPECT_EQ(ordered_json::parse(dump_json(j))["x"].get<double>(), 0.1);
}

#ifdef MFLAND_CLI_PATH
int shell(const std::string& args) {
  const int status =
      std::system((std::string(MFLAND_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

TEST_F(CliTest, ExecutableExitCodes) {
  EXPECT_EQ(shell("spectrum --x " + diag_ + " --k 1 --select 2"), 0);
  EXPECT_EQ(shell("spectrum --x " + ragged_ + " --k 1 --select 2"), 2);
  EXPECT_EQ(shell("verify --x " + random_ + " --seed 7"), 0);
  EXPECT_EQ(shell("spectrum --x " + diag_ + " --k notanumber"), 2);
  EXPECT_EQ(shell("nosuchcommand"), 2);
  EXPECT_EQ(shell("--help"), 0);
}
#endif

}  // namespace
}  // namespace mfland
