// Copyright 2026 The qcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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
#include <sstream>

#include "qcorr/experiment.hpp"

using namespace qcorr;
namespace fs = std::filesystem;

namespace {

ExperimentConfig config(const std::string& experiment, Json params, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.parameters = std::move(params);
  c.seed = seed;
  c.base_dir = QCORR_SAMPLES_DIR;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qcorr_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

/// Runs the CLI and returns its exit status; stderr goes to `err`.
int cli(const std::string& args, const fs::path& err) {
  const std::string cmd = std::string(QCORR_CLI_PATH) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(FitSlope, Examples) {
  std::vector<std::pair<double, double>> sq, flat;
  for (double x : {1.0, 2.0, 5.0, 10.0}) {
    sq.emplace_back(x, x * x);
    flat.emplace_back(x, 3.0);
  }
  const SlopeFit a = fit_loglog_slope(sq);
  EXPECT_NEAR(a.slope, 2.0, 1e-12);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit_loglog_slope(flat).slope, 0.0, 1e-12);
  EXPECT_THROW(fit_loglog_slope(std::vector<std::pair<double, double>>{{1, 1}, {2, 2}}), ArgumentError);
  EXPECT_THROW(fit_loglog_slope(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {3, 1}}), ArgumentError);
}

TEST(Config, ParsesAndRejects) {
  const auto c = parse_config(Json::parse(R"({"experiment": "dqc1", "seed": 5, "parameters": {"n": 2}})"));
  EXPECT_EQ(c.experiment, "dqc1");
  EXPECT_EQ(c.seed, 5u);
  EXPECT_THROW(parse_config(Json::parse(R"({"experiment": "dqc1", "sed": 5})")), ValidationError);
  EXPECT_THROW(parse_config(Json::parse(R"({"seed": -1})")), ValidationError);
  EXPECT_THROW(parse_config(Json::parse(R"({"parameters": []})")), ValidationError);
  EXPECT_THROW(read_config_file("/nonexistent/config.json"), ArgumentError);
}

TEST(Config, MalformedFileReportsLine) {
  const fs::path d = scratch("badcfg");
  std::ofstream(d / "c.json") << "{\n  \"experiment\": \"dqc1\",\n  \"seed\": ,\n}\n";
  try {
    read_config_file((d / "c.json").string());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("c.json:3"), std::string::npos) << e.what();
  }
}

TEST(Params, ValidationErrors) {
  EXPECT_THROW(run(config("dqc1", {{"n", 2}, {"unitaries", 2}, {"bogus", 1}})), ValidationError);
  EXPECT_THROW(run(config("dqc1", {{"n", 40}})), ValidationError);
  EXPECT_THROW(run(config("dqc1", {{"alpha", "one"}})), ValidationError);
  EXPECT_THROW(run(config("grover", {{"epsilon", {0.5, 1.5}}})), ValidationError);
  EXPECT_THROW(run(config("nope", Json::object())), ValidationError);
  EXPECT_THROW(run(config("measures", Json::object())), ValidationError);
}

TEST(Params, EffectiveParametersIncludeDefaults) {
  const ResultRecord r = run(config("dqc1", {{"n", 2}, {"unitaries", 3}}));
  const Json& p = r.payload.at("parameters");
  EXPECT_EQ(p.at("alpha").get<double>(), 1.0);
  EXPECT_EQ(p.at("n"), Json::array({2}));
  EXPECT_EQ(r.payload.at("tool_version"), kToolVersion);
  EXPECT_LT(r.payload.at("summary").at("max_abs_error").get<double>(), 1e-10);
}

TEST(StateFile, Diagnostics) {
  try {
    parse_state_json("{\n\"n_qubits\": 1,\n\"kind\": \"pure\"\n\"data\": []}", "s.json");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("s.json:4"), std::string::npos) << e.what();
  }
  auto field_error = [](const std::string& text) {
    try {
      parse_state_json(text, "s.json");
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(field_error(R"({"n_qubits": 1, "kind": "pure"})").find("field 'data'"), std::string::npos);
  EXPECT_NE(field_error(R"({"n_qubits": 1, "kind": "pure", "data": [[1, 0]]})").find("field 'data'"),
            std::string::npos);
  EXPECT_NE(field_error(R"({"n_qubits": 1, "kind": "pure", "data": [[1, 0], [1, 0]]})").find("field 'data'"),
            std::string::npos);
  EXPECT_NE(field_error(R"({"n_qubits": 1, "kind": "mixed", "data": []})").find("field 'kind'"), std::string::npos);
  EXPECT_NE(field_error(R"({"n_qubits": 30, "kind": "pure", "data": []})").find("field 'n_qubits'"),
            std::string::npos);
  // negative eigenvalue
  EXPECT_NE(field_error(R"({"n_qubits": 1, "kind": "density", "data": [[1.5,0],[0,0],[0,0],[-0.5,0]]})")
                .find("field 'data'"),
            std::string::npos);
}

TEST(StateFile, RoundTrip) {
  const StateFile a = read_state_file(std::string(QCORR_SAMPLES_DIR) + "/werner_half.json");
  EXPECT_EQ(a.kind, "density");
  const Json j = to_json(a.density);
  const StateFile b = parse_state_json(
      Json{{"n_qubits", 2}, {"kind", "density"}, {"data", j.at("data")}}.dump(), "round-trip");
  EXPECT_LT((a.density.matrix() - b.density.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Experiment, MeasuresOnBellFile) {
  const ResultRecord r = run(config("measures", {{"state", "bell.json"}, {"ree_restarts", 4}}));
  const Json& pt = r.payload.at("points").at(0);
  EXPECT_NEAR(pt.at("mutual_information").get<double>(), 2.0, 1e-10);
  EXPECT_NEAR(pt.at("classical_correlations").get<double>(), 1.0, 1e-6);
  EXPECT_NEAR(pt.at("discord").get<double>(), 0.0, 1e-6);
  EXPECT_NEAR(pt.at("entanglement_ree").get<double>(), 1.0, 1e-3);
}

TEST(Experiment, DjSweepSlopes) {
  const ResultRecord r = run(config("dj-sweep", {{"n", 6}, {"epsilon", {{"log10_min", -5}, {"log10_max", -3}, {"points", 5}}}}));
  const Json& f = r.payload.at("summary").at("fits").at("6");
  EXPECT_NEAR(f.at("holevo_slope").get<double>(), 2.0, 0.05);
  EXPECT_NEAR(f.at("discord_slope").get<double>(), 2.0, 0.05);
  ASSERT_EQ(r.tables.size(), 1u);
  const std::string csv = to_csv(r.tables[0]);
  for (const char* col : {"# epsilon:", "# holevo:", "# discord:", "# ratio:"})
    EXPECT_NE(csv.find(col), std::string::npos) << col;
}

TEST(Experiment, Dqc1MatchesDirectTrace) {
  const ResultRecord r = run(config("dqc1", {{"n", 4}, {"unitaries", 20}}, 11));
  EXPECT_LT(r.payload.at("summary").at("max_abs_error").get<double>(), 1e-10);
}

TEST(Experiment, CsvColumnsAreDocumented) {
  for (const auto& [name, params] : std::vector<std::pair<std::string, Json>>{
           {"dqc1", {{"n", 2}, {"unitaries", 2}}},
           {"grover", {{"n", {2, 3}}}},
           {"cluster-bound", {{"topologies", "linear"}, {"n", {2, 3}}, {"sets", 3}, {"restarts", 3}}},
           {"separability-audit", {{"n", 2}, {"unitaries", 3}}}}) {
    const ResultRecord r = run(config(name, params));
    ASSERT_FALSE(r.tables.empty()) << name;
    for (const auto& t : r.tables) {
      const std::string csv = to_csv(t);
      std::istringstream in(csv);
      std::string line;
      for (const auto& [col, desc] : t.columns) {
        std::getline(in, line);
        EXPECT_EQ(line, "# " + col + ": " + desc);
        EXPECT_FALSE(desc.empty());
      }
      for (const auto& row : t.rows) EXPECT_EQ(row.size(), t.columns.size());
    }
  }
}

TEST(Experiment, PayloadIsDeterministic) {
  const auto cfg = config("cluster-bound", {{"topologies", {"linear", "ring"}}, {"n", {3, 4}}, {"sets", 5}, {"restarts", 4}}, 9);
  EXPECT_EQ(run(cfg).payload.dump(), run(cfg).payload.dump());
  auto threaded = cfg;
  threaded.parameters["workers"] = 3;
  Json a = run(cfg).payload;
  Json b = run(threaded).payload;
  a["parameters"].erase("workers");
  b["parameters"].erase("workers");
  EXPECT_EQ(a.dump(), b.dump());
  auto other = cfg;
  other.seed = 10;
  EXPECT_NE(run(cfg).payload.at("points").dump(), run(other).payload.at("points").dump());
}

TEST(Experiment, WriteRecordKeepsWallTimeOutsidePayload) {
  const fs::path d = scratch("write");
  const ResultRecord r = run(config("dqc1", {{"n", 1}, {"unitaries", 2}}));
  const auto files = write_record(r, d.string());
  ASSERT_EQ(files.size(), 2u);
  const Json doc = Json::parse(slurp(d / "dqc1.json"));
  EXPECT_EQ(doc.at("payload"), r.payload);
  EXPECT_TRUE(doc.contains("wall_time_seconds"));
  EXPECT_TRUE(fs::exists(d / "dqc1_unitaries.csv"));
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch("cli");
  const fs::path err = d / "err.txt";
  const std::string samples = QCORR_SAMPLES_DIR;

  EXPECT_EQ(cli("dqc1 --config " + samples + "/dqc1.json --quiet --out " + (d / "out").string(), err), 0);
  EXPECT_TRUE(fs::exists(d / "out" / "dqc1.json"));

  EXPECT_EQ(cli("measures --state " + samples + "/bell.json --cut '0|rest' --quiet --out " + (d / "m").string(), err), 0);

  std::ofstream(d / "bad.json") << R"({"experiment": "dqc1", "parameters": {"n": 40}})";
  EXPECT_EQ(cli("dqc1 --config " + (d / "bad.json").string(), err), 2);
  const Json e = Json::parse(slurp(err));
  EXPECT_EQ(e.at("error").at("kind"), "validation");

  EXPECT_EQ(cli("dqc1", err), 2);
  EXPECT_EQ(cli("dqc1 --config " + samples + "/dqc1.json --bogus", err), 2);

  std::ofstream(d / "budget.json") << R"({"experiment": "grover", "parameters": {"n": 3, "iterations": 10001}})";
  EXPECT_EQ(cli("grover --config " + (d / "budget.json").string(), err), 3);
  EXPECT_EQ(Json::parse(slurp(err)).at("error").at("kind"), "budget");
  std::ofstream(d / "budget_ok.json") << R"({"experiment": "grover", "parameters": {"n": 2, "iterations": 3}})";
  EXPECT_EQ(cli("grover --config " + (d / "budget_ok.json").string() + " --quiet --out " + (d / "g").string(), err), 0);

  std::ofstream(d / "big.json") << R"({"experiment": "dj-sweep", "parameters": {"n": 11}})";
  EXPECT_EQ(cli("dj-sweep --config " + (d / "big.json").string(), err), 2);
}

TEST(Cli, SeedOverrideIsDeterministic) {
  const fs::path d = scratch("cli_seed");
  const fs::path err = d / "err.txt";
  const std::string cfg = std::string(QCORR_SAMPLES_DIR) + "/dqc1.json";
  ASSERT_EQ(cli("dqc1 --config " + cfg + " --seed 42 --quiet --out " + (d / "a").string(), err), 0);
  ASSERT_EQ(cli("dqc1 --config " + cfg + " --seed 42 --quiet --out " + (d / "b").string(), err), 0);
  const Json a = Json::parse(slurp(d / "a" / "dqc1.json"));
  const Json b = Json::parse(slurp(d / "b" / "dqc1.json"));
  EXPECT_EQ(a.at("payload").dump(), b.at("payload").dump());
  EXPECT_EQ(a.at("payload").at("seed"), 42);
}
