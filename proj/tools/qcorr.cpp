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

// qcorr: experiment runner.
//
//   qcorr <experiment> --config <file.json> [--seed N] [--out DIR]
//   qcorr measures --state <state.json> --cut 0|rest
//
// Exit codes: 0 ok, 2 validation, 3 budget, 4 numerical.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcorr/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumerical = 4;

int exit_code(const std::string& kind) {
  if (kind == "budget" || kind == "resource") return kExitBudget;
  if (kind == "numerical") return kExitNumerical;
  return kExitValidation;
}

int report_error(const std::string& kind, const std::string& message) {
  const qcorr::Json err{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return exit_code(kind);
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string state;
  std::string cut = "0|rest";
  std::string side = "auto";
  bool quiet = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation measures and pseudopure algorithm experiments", "qcorr"};
  app.set_version_flag("--version", std::string(qcorr::kToolVersion));
  app.require_subcommand(1);

  Options opt;
  for (const auto& name : qcorr::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", opt.config, "experiment configuration (JSON)");
    sub->add_option("--seed", opt.seed, "root seed, overrides the config");
    sub->add_option("--out", opt.out, "output directory, overrides the config");
    sub->add_flag("--quiet", opt.quiet, "do not print the summary");
    if (name == "measures") {
      sub->add_option("--state", opt.state, "state file (JSON)");
      sub->add_option("--cut", opt.cut, "bipartition, e.g. 0|rest or 0,2|1,3");
      sub->add_option("--measured-side", opt.side, "a, b or auto");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("argument", e.what());
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    qcorr::ExperimentConfig cfg;
    if (!opt.config.empty()) {
      cfg = qcorr::read_config_file(opt.config);
      if (!cfg.experiment.empty() && cfg.experiment != experiment)
        throw qcorr::ValidationError("config is for '" + cfg.experiment + "', not '" + experiment + "'");
    } else if (experiment != "measures") {
      throw qcorr::ArgumentError("--config is required for " + experiment);
    }
    cfg.experiment = experiment;
    if (experiment == "measures" && !opt.state.empty()) {
      cfg.parameters["state"] = opt.state;
      cfg.parameters["cut"] = opt.cut;
      cfg.parameters["measured_side"] = opt.side;
      cfg.base_dir = ".";
    } else if (experiment == "measures" && opt.config.empty()) {
      throw qcorr::ArgumentError("measures needs --state or --config");
    }
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.out.empty()) cfg.output_path = opt.out;
    if (cfg.output_path.empty()) cfg.output_path = "results";

    const qcorr::ResultRecord rec = qcorr::run(cfg);
    const auto files = qcorr::write_record(rec, cfg.output_path);
    if (!opt.quiet) {
      std::cout << rec.payload.at("summary").dump(2) << "\n";
      for (const auto& f : files) std::cout << "wrote " << f << "\n";
    }
    return kExitOk;
  } catch (const qcorr::Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
}
