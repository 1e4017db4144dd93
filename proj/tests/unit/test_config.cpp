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

#include "config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "rmcredit/rmcredit.h"
#include "test_support.hpp"

namespace rmcredit::cli {
namespace {

template <class Exception, class Fn>
std::string message_of(const Fn& fn) {
  try {
    fn();
  } catch (const Exception& e) {
    return e.what();
  }
  return "<no exception>";
}

TEST(Config, DefaultsForLossDistribution) {
  const auto config = parse_config("loss-dist", {});
  EXPECT_DOUBLE_EQ(config.real("c"), 0.28);
  EXPECT_DOUBLE_EQ(config.real("n"), 6.0);
  EXPECT_DOUBLE_EQ(config.real("mu"), 0.17);
  EXPECT_DOUBLE_EQ(config.real("rho"), 0.35);
  EXPECT_DOUBLE_EQ(config.real("face"), 75.0);
  EXPECT_DOUBLE_EQ(config.real("initial"), 100.0);
  EXPECT_DOUBLE_EQ(config.real("maturity"), 1.0);
  EXPECT_EQ(config.text("grid"), "uniform");
  EXPECT_EQ(config.reals("alphas"), (std::vector<double>{0.95, 0.99, 0.999}));
  EXPECT_EQ(config.sources.at("c"), Source::kDefault);
}

TEST(Config, PrecedenceFlagOverFileOverDefault) {
  const auto config = parse_config("loss-dist", {{"c", "0.4"}}, {{"c", "0.3"}, {"n", "8"}});
  EXPECT_DOUBLE_EQ(config.real("c"), 0.4);
  EXPECT_EQ(config.sources.at("c"), Source::kFlag);
  EXPECT_DOUBLE_EQ(config.real("n"), 8.0);
  EXPECT_EQ(config.sources.at("n"), Source::kFile);
  EXPECT_DOUBLE_EQ(config.real("rho"), 0.35);
  EXPECT_EQ(config.sources.at("rho"), Source::kDefault);
  EXPECT_STREQ(to_string(Source::kFile), "file");
}

TEST(Config, InfinityIsAccepted) {
  const auto config = parse_config("loss-dist", {{"n", "inf"}, {"k", "inf"}});
  EXPECT_TRUE(std::isinf(config.real("n")));
  EXPECT_TRUE(std::isinf(config.real("k")));
  EXPECT_THROW(parse_config("var", {{"k", "inf"}, {"seed", "1"}}), UsageError);
}

TEST(Config, RangeErrors) {
  const std::string msg = message_of<UsageError>([] { parse_config("loss-dist", {{"c", "1.5"}}); });
  EXPECT_NE(msg.find("c"), std::string::npos) << msg;
  EXPECT_THROW(parse_config("loss-dist", {{"c", "1"}}), UsageError);
  EXPECT_THROW(parse_config("loss-dist", {{"c", "-0.1"}}), UsageError);
  EXPECT_THROW(parse_config("loss-dist", {{"c", "abc"}}), UsageError);
  EXPECT_THROW(parse_config("loss-dist", {{"grid", "cubic"}}), UsageError);
  EXPECT_THROW(parse_config("loss-dist", {{"alphas", "0.9,1.2"}}), UsageError);
  EXPECT_THROW(parse_config("var", {{"seed", "-4"}}), UsageError);
  EXPECT_THROW(parse_config("var", {{"seed", "3"}, {"trials", "2.5"}}), UsageError);
}

TEST(Config, UnknownKeysAreRejected) {
  try {
    parse_config("loss-dist", {}, {{"sigma", "0.2"}});
    FAIL() << "expected UsageError";
  } catch (const UsageError& e) {
    EXPECT_EQ(e.key(), "sigma");
  }
  EXPECT_THROW(parse_config("loss-dist", {{"seed", "4"}}), UsageError);
  EXPECT_THROW(schema("no-such-command"), UsageError);
}

TEST(Config, StochasticCommandsRequireSeed) {
  for (const char* command : {"var", "copula", "synth"}) {
    EXPECT_TRUE(schema(command).stochastic) << command;
    std::map<std::string, std::string> flags;
    if (std::string(command) == "copula") flags["scenario"] = "drift-neg";
    const std::string msg = message_of<UsageError>([&] { parse_config(command, flags); });
    EXPECT_NE(msg.find("seed"), std::string::npos) << command << ": " << msg;
    flags["seed"] = "18446744073709551615";
    EXPECT_EQ(parse_config(command, flags).seed(), 18446744073709551615ull);
  }
  EXPECT_FALSE(schema("loss-dist").stochastic);
}

TEST(Config, FileParsing) {
  const auto values = parse_config_text("# header\n\n c = 0.3  # trailing\nn=inf\ngrid = log\n", "test.cfg");
  EXPECT_EQ(values.size(), 3u);
  EXPECT_EQ(values.at("c"), "0.3");
  EXPECT_EQ(values.at("n"), "inf");
  EXPECT_EQ(values.at("grid"), "log");
  const std::string dup = message_of<UsageError>([] { parse_config_text("c=0.1\nc=0.2\n", "dup.cfg"); });
  EXPECT_NE(dup.find("dup.cfg:2"), std::string::npos) << dup;
  const std::string bad = message_of<UsageError>([] { parse_config_text("c 0.1\n", "bad.cfg"); });
  EXPECT_NE(bad.find("bad.cfg:1"), std::string::npos) << bad;
}

TEST(Config, ReadsFilesAndReportsMissing) {
  rmcredit::testing::ScratchDir dir("config");
  const auto path = dir / "run.cfg";
  std::ofstream(path) << "seed = 7\ntrials = 1000\n";
  const auto values = read_config_file(path);
  const auto config = parse_config("var", {}, values);
  EXPECT_EQ(config.seed(), 7u);
  EXPECT_EQ(config.count("trials"), 1000u);
  EXPECT_EQ(config.sources.at("seed"), Source::kFile);
  EXPECT_THROW(read_config_file(dir / "missing.cfg"), IoError);
}

TEST(Config, ScenarioChoicesMatchLibrary) {
  const KeySpec* key = schema("copula").find("scenario");
  ASSERT_NE(key, nullptr);
  ASSERT_EQ(key->choices.size(), rmc_scenario_count());
  for (std::size_t i = 0; i < key->choices.size(); ++i) EXPECT_EQ(key->choices[i], rmc_scenario_name(i));
}

TEST(Config, EverySubcommandHasSchema) {
  std::vector<std::string> names;
  for (const auto& s : schemas()) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"estimate", "fit-n", "loss-dist", "var", "copula", "synth"}));
  for (const auto& s : schemas()) {
    for (const auto& k : s.keys) {
      if (k.fallback.empty()) continue;
      EXPECT_EQ(validate_value(k, k.fallback), k.fallback) << s.name << '.' << k.name;
    }
  }
}

TEST(Config, ValueAccessors) {
  const auto config = parse_config("var", {{"seed", "3"}, {"dump_losses", "true"}, {"alphas", " 0.5 , 0.9 "}});
  EXPECT_TRUE(config.flag("dump_losses"));
  EXPECT_EQ(config.reals("alphas"), (std::vector<double>{0.5, 0.9}));
  EXPECT_EQ(config.text("drift"), "ito");
  EXPECT_THROW(config.text("nonexistent"), UsageError);
}

}  // namespace
}  // namespace rmcredit::cli
