/*
 * Copyright 2026 The sgfair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "sgfair/audit.hpp"
#include "sgfair/cli.hpp"
#include "sgfair/error.hpp"
#include "test_support.hpp"

using namespace sgfair;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Run(std::vector<std::string> args) {
  args.insert(args.begin(), "sgfair");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path TempFile(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("sgfair_test_" + name);
  std::ofstream(path) << body;
  return path;
}

AuditConfig Gerrymandered(std::vector<std::string> protected_attributes) {
  AuditConfig c;
  c.command = Command::kClassify;
  c.data_path = testing::Fixture("gerrymandering.csv");
  c.protected_attributes = std::move(protected_attributes);
  c.pred_col = "passed";
  c.metrics = {"dpr"};
  return c;
}

AuditConfig LsacRates() {
  AuditConfig c;
  c.command = Command::kClassify;
  c.rates_path = testing::Fixture("lsac_fnr_rates.csv");
  c.metrics = {"fnr-parity"};
  return c;
}

int Shell(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = Gerrymandered({"race"});
  CHECK_NOTHROW(validate(c));

  auto bad = c;
  bad.threshold = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.threshold = 1.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.bins = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.k = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.protected_attributes.clear();
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.data_path.clear();
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.metrics = {"wdkl"};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.metrics = {"dpr", "dpr"};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.attention = {AttentionModel::Kind::kGeometric, 1.0};
  CHECK_THROWS_AS(validate(bad), ConfigError);

  auto rates = LsacRates();
  CHECK_NOTHROW(validate(rates));
  rates.metrics = {"fnr-parity", "dpr"};
  CHECK_THROWS_AS(validate(rates), ConfigError);
  rates = LsacRates();
  rates.command = Command::kDist;
  CHECK_THROWS_AS(validate(rates), ConfigError);

  auto eopp = c;
  eopp.metrics = {"eopp"};
  CHECK_THROWS_AS(run_audit(eopp), ConfigError);
  auto cspr = c;
  cspr.metrics = {"cspr"};
  CHECK_THROWS_AS(run_audit(cspr), ConfigError);
}

TEST_CASE("default metric selection") {
  auto c = Gerrymandered({"race"});
  c.metrics.clear();
  const auto report = run_audit(c);
  REQUIRE(report.metrics.size() == 2);
  CHECK(report.metrics[0].result.metric_id == "dpr");
  CHECK(report.metrics[1].result.metric_id == "di");
  CHECK(report.config.metrics == std::vector<std::string>{"dpr", "di"});
  CHECK(report.metrics[0].verdict->rule == "four-fifths (extended)");
  CHECK(report.metrics[1].verdict->rule == "four-fifths");

  auto rates = LsacRates();
  rates.metrics.clear();
  const auto r = run_audit(rates);
  REQUIRE(r.metrics.size() == 1);
  CHECK(r.metrics[0].result.metric_id == "min-max-ratio");
}

TEST_CASE("precomputed false negative rates fail the four-fifths rule") {
  const auto report = run_audit(LsacRates());
  REQUIRE(report.metrics.size() == 1);
  const auto& m = report.metrics[0];
  CHECK(*m.result.value == doctest::Approx(0.002398 / 0.065327).epsilon(1e-12));
  CHECK(std::fabs(*m.result.value - 0.036708) < 1e-6);
  CHECK(m.result.min_subgroup == "gender=woman\xC3\x97race=asian");
  CHECK(m.result.max_subgroup == "gender=man\xC3\x97race=black");
  REQUIRE(m.verdict);
  CHECK(m.verdict->rule == "four-fifths (extended)");
  CHECK(m.verdict->pass == false);
  CHECK(report.failed_verdicts() == 1);
  CHECK(exit_code(report) == 2);
  REQUIRE(report.inputs.size() == 1);
  CHECK(report.inputs[0].role == "rates");
  CHECK(report.inputs[0].sha256.size() == 64);
  CHECK_FALSE(report.partition);
}

TEST_CASE("gerrymandering example") {
  const auto race = run_audit(Gerrymandered({"race"}));
  CHECK(*race.metrics[0].result.value == 1.0);
  CHECK(exit_code(race) == 0);
  const auto gender = run_audit(Gerrymandered({"gender"}));
  CHECK(*gender.metrics[0].result.value == 1.0);
  const auto both = run_audit(Gerrymandered({"race", "gender"}));
  CHECK(*both.metrics[0].result.value == 0.0);
  CHECK(exit_code(both) == 2);
  REQUIRE(both.partition);
  CHECK(both.partition->included == 4);
  CHECK(both.partition->records == 20);
}

TEST_CASE("json report") {
  const auto report = run_audit(Gerrymandered({"race", "gender"}));
  const auto text = emit_report(report, OutputFormat::kJson);
  CHECK(text == emit_report(run_audit(Gerrymandered({"race", "gender"})), OutputFormat::kJson));

  const auto j = nlohmann::json::parse(text);
  CHECK(j["schema_version"] == "1");
  CHECK(j["tool"]["name"] == "sgfair");
  CHECK(j["tool"]["version"] == kToolVersion);
  CHECK(j["config"]["protected"] == nlohmann::json::array({"race", "gender"}));
  CHECK(j["config"]["threshold"] == 0.8);
  CHECK(j["partition"]["subgroups"].size() == 4);
  CHECK(j["metrics"][0]["id"] == "dpr");
  CHECK(j["metrics"][0]["value"] == 0.0);
  CHECK(j["metrics"][0]["verdict"]["status"] == "fail");
  CHECK(j["summary"]["exit_code"] == 2);
  CHECK(j["inputs"][0]["sha256"] == report.inputs[0].sha256);

  SUBCASE("undefined values are null with a reason") {
    const auto data = TempFile("undefined.csv", "g,p,t\na,1,0\nb,0,0\n");
    AuditConfig c;
    c.command = Command::kClassify;
    c.data_path = data.string();
    c.protected_attributes = {"g"};
    c.pred_col = "p";
    c.label_col = "t";
    c.metrics = {"eopp"};
    const auto r = run_audit(c);
    CHECK_FALSE(r.metrics[0].result.value);
    CHECK_FALSE(r.metrics[0].verdict->pass);
    CHECK(exit_code(r) == 0);
    const auto u = nlohmann::json::parse(emit_report(r, OutputFormat::kJson));
    CHECK(u["metrics"][0]["value"].is_null());
    CHECK(u["metrics"][0]["undefined_reason"] == "TPR undefined for every subgroup");
    CHECK(u["metrics"][0]["verdict"]["status"] == "undefined");
    c.strict = true;
    CHECK_THROWS_AS(run_audit(c), UsageError);
    std::filesystem::remove(data);
  }
}

TEST_CASE("markdown report lists every subgroup") {
  const auto text = emit_report(run_audit(LsacRates()), OutputFormat::kMarkdown);
  CHECK(text.find("## fnr-parity") != std::string::npos);
  std::ifstream in(testing::Fixture("lsac_fnr_rates.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto label = line.substr(0, line.find(','));
    CHECK(text.find("| " + label + " | ") != std::string::npos);
    ++rows;
  }
  CHECK(rows == 8);
  CHECK(text.find("Failed verdicts: 1") != std::string::npos);
}

TEST_CASE("command line front end") {
  const auto gerrymandered = testing::Fixture("gerrymandering.csv");
  const auto rates = testing::Fixture("lsac_fnr_rates.csv");

  SUBCASE("exit codes") {
    CHECK(Run({"classify", "--data", gerrymandered, "--protected", "race", "--pred-col", "passed"}).code == 0);
    const auto fail = Run({"classify", "--rates-file", rates, "--metrics", "fnr-parity"});
    CHECK(fail.code == 2);
    CHECK(nlohmann::json::parse(fail.out)["metrics"][0]["value"] == 0.0367076);
    const auto missing = Run({"classify", "--data", "/nonexistent.csv", "--protected", "race",
                              "--pred-col", "passed"});
    CHECK(missing.code == 1);
    CHECK(missing.err.rfind("error [", 0) == 0);
    CHECK(missing.out.empty());
    CHECK(Run({"classify", "--data", gerrymandered, "--protected", "race", "--pred-col", "passed",
               "--metrics", "eopp"}).code == 1);
    CHECK(Run({"classify", "--bogus"}).code == 1);
    CHECK(Run({}).code == 1);
    CHECK(Run({"classify", "--data", gerrymandered, "--protected", "race", "--pred-col", "passed",
               "--threshold", "2"}).code == 1);
  }
  SUBCASE("protected attribute order matters for labels") {
    const auto r = Run({"classify", "--data", gerrymandered, "--protected", "gender,race", "--pred-col",
                        "passed", "--metrics", "dpr"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["partition"]["subgroups"][0]["label"] == "gender=man\xC3\x97race=black");
  }
  SUBCASE("markdown output to a file") {
    const auto path = std::filesystem::temp_directory_path() / "sgfair_test_report.md";
    const auto r = Run({"classify", "--rates-file", rates, "--format", "markdown", "--output",
                        path.string()});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(body.str().rfind("# ", 0) == 0);
    CHECK(body.str().find("min-max-ratio") != std::string::npos);
    std::filesystem::remove(path);
  }
  SUBCASE("config file") {
    const auto cfg = TempFile("audit.ini",
                              "[classify]\ndata=" + gerrymandered +
                                  "\nprotected=race\npred-col=passed\nthreshold=0.9\n");
    const auto r = Run({"--config", cfg.string(), "classify"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["threshold"] == 0.9);
    CHECK(j["config"]["pred_col"] == "passed");
    std::filesystem::remove(cfg);
  }
  SUBCASE("version") {
    const auto r = Run({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find(kToolVersion) != std::string::npos);
  }
  SUBCASE("tab delimited data") {
    const auto data = TempFile("tab.tsv", "g\tp\na\t1\nb\t1\n");
    const auto r = Run({"classify", "--data", data.string(), "--delimiter", "tab", "--protected",
                        "g", "--pred-col", "p", "--metrics", "dpr"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["config"]["delimiter"] == "tab");
    std::filesystem::remove(data);
  }
}

TEST_CASE("installed binary") {
  const std::string cli = SGFAIR_CLI_PATH;
  const auto gerrymandered = testing::Fixture("gerrymandering.csv");
  const auto rates = testing::Fixture("lsac_fnr_rates.csv");
  CHECK(Shell(cli + " --version") == 0);
  CHECK(Shell(cli + " classify --data " + gerrymandered + " --protected race --pred-col passed") == 0);
  CHECK(Shell(cli + " classify --rates-file " + rates) == 2);
  CHECK(Shell(cli + " classify --data /nonexistent.csv --protected race --pred-col passed") == 1);
}
