// Copyright 2026 The rmcredit Authors.
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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
  int exit_code = -1;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rmcredit_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) const {
    const auto err = dir_ / "stderr.txt";
    const std::string command = std::string(RMCREDIT_CLI) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(command.c_str());
    Result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  std::string out(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwoWithJson) {
  for (const std::string args : {"loss-dist --c 1.5", "var --k 10", "loss-dist --bogus 1", "frobnicate",
                                 "copula --seed 1 --scenario nope"}) {
    const auto r = run(args + " --out " + out("x"));
    EXPECT_EQ(r.exit_code, 2) << args << "\n" << r.err;
    if (args.rfind("loss-dist --c", 0) == 0 || args.rfind("var", 0) == 0) {
      const auto error = Json::parse(r.err).at("error");
      EXPECT_EQ(error.at("exit_code"), 2);
      EXPECT_EQ(error.at("kind"), "usage");
      EXPECT_TRUE(error.contains("message"));
    }
  }
  const auto seed = Json::parse(run("var --k 10 --out " + out("x")).err).at("error");
  EXPECT_EQ(seed.at("key"), "seed");
}

TEST_F(CliTest, MissingInputExitsFour) {
  const auto r = run("estimate --input " + out("missing.csv") + " --out " + out("e"));
  EXPECT_EQ(r.exit_code, 4) << r.err;
  const auto error = Json::parse(r.err).at("error");
  EXPECT_EQ(error.at("kind"), "io");
  const auto cfg = run("loss-dist --config " + out("missing.cfg") + " --out " + out("e"));
  EXPECT_EQ(cfg.exit_code, 4) << cfg.err;
}

TEST_F(CliTest, NumericFailureExitsThree) {
  {
    std::ofstream csv(out("flat.csv"));
    csv << "date,asset_id,close\n";
    for (int d = 1; d <= 9; ++d) csv << "2020-01-0" << d << ",A,100\n" << "2020-01-0" << d << ",B,100\n";
  }
  const auto r = run("estimate --input " + out("flat.csv") + " --out " + out("e"));
  EXPECT_EQ(r.exit_code, 3) << r.err;
  EXPECT_EQ(Json::parse(r.err).at("error").at("exit_code"), 3);
}

TEST_F(CliTest, SynthThenEstimate) {
  ASSERT_EQ(run("synth --seed 3 --assets 4 --observations 250 --out " + out("s")).exit_code, 0);
  const std::string market = slurp(out("s/market.csv"));
  EXPECT_EQ(market.rfind("# seed=3", 0), 0u);
  ASSERT_EQ(run("estimate --input " + out("s/market.csv") + " --window 50 --out " + out("e")).exit_code, 0);
  std::istringstream moments(slurp(out("e/moments.csv")));
  std::string line;
  int rows = 0;
  std::getline(moments, line);
  EXPECT_EQ(line, "asset_id,mu,sigma,rho");
  while (std::getline(moments, line)) ++rows;
  EXPECT_EQ(rows, 4);
  const auto corr = Json::parse(slurp(out("e/correlation.json")));
  EXPECT_EQ(corr.at("dim"), 4);
  EXPECT_TRUE(fs::exists(out("e/windows.csv")));
  const auto manifest = Json::parse(slurp(out("e/manifest.json")));
  EXPECT_EQ(manifest.at("subcommand"), "estimate");
  EXPECT_TRUE(manifest.at("seed").is_null());
}

TEST_F(CliTest, ManifestReplayIsByteIdentical) {
  ASSERT_EQ(run("var --seed 42 --k 20 --trials 20000 --dump-losses true --out " + out("a")).exit_code, 0);
  const auto replay = run("var --manifest " + out("a/manifest.json") + " --out " + out("b"));
  ASSERT_EQ(replay.exit_code, 0) << replay.err;
  for (const char* file : {"risk.json", "losses.csv"})
    EXPECT_EQ(slurp(out(std::string("a/") + file)), slurp(out(std::string("b/") + file))) << file;
  const auto risk = Json::parse(slurp(out("a/risk.json")));
  EXPECT_EQ(risk.at("seed"), 42);
  ASSERT_EQ(run("var --seed 42 --k 20 --trials 20000 --workers 1 --out " + out("c")).exit_code, 0);
  const auto one = Json::parse(slurp(out("c/risk.json")));
  EXPECT_EQ(one.at("entries"), risk.at("entries"));
  const auto mismatch = run("loss-dist --manifest " + out("a/manifest.json") + " --out " + out("d"));
  EXPECT_EQ(mismatch.exit_code, 2);
}

TEST_F(CliTest, CopulaWritesLayers) {
  ASSERT_EQ(run("copula --scenario drift-neg --seed 5 --trials 5000 --out " + out("c")).exit_code, 0);
  for (const char* file : {"copula_empirical.csv", "copula_gaussian.csv", "copula_deviation.csv"}) {
    const std::string text = slurp(out(std::string("c/") + file));
    EXPECT_EQ(text.rfind("# seed=5", 0), 0u) << file;
    EXPECT_NE(text.find("u_center,v_center,density"), std::string::npos) << file;
  }
  const auto summary = Json::parse(slurp(out("c/copula_summary.json")));
  EXPECT_EQ(summary.at("scenario"), "drift-neg");
  EXPECT_EQ(summary.at("corners").size(), 4u);
  const auto manifest = Json::parse(slurp(out("c/manifest.json")));
  EXPECT_EQ(manifest.at("outputs").size(), 4u);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  std::ofstream(out("run.cfg")) << "# loss settings\nc = 0.3\nk = 20\ngrid = log\ngrid_points = 256\n";
  ASSERT_EQ(run("loss-dist --config " + out("run.cfg") + " --c 0.2 --out " + out("l")).exit_code, 0);
  const auto manifest = Json::parse(slurp(out("l/manifest.json")));
  EXPECT_EQ(manifest.at("config").at("c"), "0.2");
  EXPECT_EQ(manifest.at("sources").at("c"), "flag");
  EXPECT_EQ(manifest.at("config").at("k"), "20");
  EXPECT_EQ(manifest.at("sources").at("k"), "file");
  EXPECT_EQ(manifest.at("sources").at("rho"), "default");
  std::ofstream(out("coarse.cfg")) << "k = 20\ngrid_points = 16\n";
  const auto coarse = run("loss-dist --config " + out("coarse.cfg") + " --out " + out("n"));
  EXPECT_EQ(coarse.exit_code, 3) << coarse.err;
  std::ofstream(out("bad.cfg")) << "sigma = 0.2\n";
  EXPECT_EQ(run("loss-dist --config " + out("bad.cfg") + " --out " + out("m")).exit_code, 2);
}

TEST_F(CliTest, LossDistributionOutputs) {
  ASSERT_EQ(run("loss-dist --k inf --grid log --grid-points 200 --out " + out("l")).exit_code, 0);
  std::istringstream csv(slurp(out("l/loss_density.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "loss,density,cdf");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 200);
  const auto risk = Json::parse(slurp(out("l/loss_risk.json")));
  EXPECT_EQ(risk.at("risk").size(), 3u);
}

}  // namespace
