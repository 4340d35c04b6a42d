// Copyright 2026 The rpsdyn Authors.
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

// rpsdyn: run, sweep and verify FP/GD dynamics on RPS games.
//
// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 I/O error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rpsdyn/error.hpp"
#include "rpsdyn/experiment.hpp"
#include "rpsdyn/io.hpp"
#include "rpsdyn/suite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string arithmetic;
};

std::filesystem::path OutDir(const CommonFlags& flags) {
  if (!flags.out.empty()) return flags.out;
  if (const char* env = std::getenv("RPSDYN_OUT_DIR"); env && *env) return env;
  return "rpsdyn_out";
}

rpsdyn::RunOptions Options(const CommonFlags& flags) {
  rpsdyn::RunOptions options;
  options.seed = flags.seed;
  if (!flags.arithmetic.empty()) options.arithmetic = rpsdyn::ParseArithmetic(flags.arithmetic);
  return options;
}

rpsdyn::ExperimentSpec LoadSpec(const std::string& path) {
  if (path.empty()) rpsdyn::Fail(rpsdyn::ErrorCode::kConfigInvalid, "--config is required");
  std::string text = rpsdyn::ReadTextFile(path);
  rpsdyn::Json j;
  try {
    j = rpsdyn::Json::parse(text);
  } catch (const rpsdyn::Json::exception& e) {
    rpsdyn::Fail(rpsdyn::ErrorCode::kConfigInvalid, path + ": " + e.what());
  }
  return rpsdyn::ExperimentSpec::FromJson(j);
}

void PrintVerdicts(const rpsdyn::RunResult& r) {
  for (const auto& v : r.verdicts) {
    std::cout << "  " << (v.pass ? "[PASS] " : "[FAIL] ") << v.check << ' ' << v.details.dump()
              << '\n';
  }
}

int RunSingle(const rpsdyn::ExperimentSpec& spec, const CommonFlags& flags) {
  if (!spec.sweep.empty()) {
    rpsdyn::Fail(rpsdyn::ErrorCode::kConfigInvalid,
                 "spec '" + spec.name + "' has a sweep; use the sweep command");
  }
  rpsdyn::RunResult r = rpsdyn::RunExperiment(spec, Options(flags));
  rpsdyn::ExperimentSpec effective = spec;
  if (flags.seed) effective.seed = *flags.seed;
  auto files = rpsdyn::WriteRunOutputs(r, effective, OutDir(flags));
  std::cout << r.name << ": T=" << r.horizon << " Reg(T)=" << rpsdyn::FormatDouble(r.regret)
            << " arithmetic=" << rpsdyn::ArithmeticName(r.arithmetic)
            << " config_hash=" << r.config_hash << '\n';
  PrintVerdicts(r);
  for (const auto& f : files) std::cout << "  wrote " << f.string() << '\n';
  return flags.strict && !r.AllPass() ? kExitVerification : kExitOk;
}

int RunSweepCommand(const rpsdyn::ExperimentSpec& spec, const CommonFlags& flags) {
  rpsdyn::SweepResult sweep = rpsdyn::RunSweep(spec, Options(flags));
  const std::filesystem::path dir = OutDir(flags);
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    rpsdyn::WriteRunOutputs(sweep.runs[i], sweep.points[i].spec, dir);
  }
  const std::filesystem::path table = dir / (spec.name + "_sweep.csv");
  rpsdyn::WriteTextFile(table, sweep.csv);
  std::cout << sweep.csv;
  std::cout << "wrote " << table.string() << " and " << sweep.points.size() << " runs\n";
  return flags.strict && !sweep.AllPass() ? kExitVerification : kExitOk;
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags, bool with_config) {
  if (with_config) cmd->add_option("--config", flags.config, "experiment spec (JSON)");
  cmd->add_option("--out", flags.out, "output directory (default $RPSDYN_OUT_DIR or ./rpsdyn_out)");
  cmd->add_option("--seed", flags.seed, "seed override");
  cmd->add_flag("--strict", flags.strict, "exit 1 when any verdict fails");
  cmd->add_option("--arithmetic", flags.arithmetic, "float or rational")
      ->check(CLI::IsMember({"float", "rational"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fictitious Play and Gradient Descent on weighted Rock-Paper-Scissors"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* run = app.add_subcommand("run", "run one experiment spec");
  AddCommonFlags(run, flags, true);
  CLI::App* sweep = app.add_subcommand("sweep", "run every point of a spec's sweep");
  AddCommonFlags(sweep, flags, true);

  std::string level = "quick";
  std::string fault;
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--level", level, "quick (T <= 1e3) or full (T <= 1e5)")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--inject-fault", fault, "deliberately break one check (eta0)")
      ->check(CLI::IsMember({"eta0"}));
  verify->add_option("--seed", flags.seed, "seed for randomized checks");
  verify->add_option("--out", flags.out, "also write verify_report.json here");

  CLI::App* preset = app.add_subcommand("preset", "figure presets");
  preset->require_subcommand(1);
  CLI::App* preset_list = preset->add_subcommand("list", "list presets");
  std::string preset_id;
  CLI::App* preset_run = preset->add_subcommand("run", "run a preset");
  preset_run->add_option("id", preset_id, "preset id")->required();
  AddCommonFlags(preset_run, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return RunSingle(LoadSpec(flags.config), flags);
    if (*sweep) return RunSweepCommand(LoadSpec(flags.config), flags);
    if (*verify) {
      rpsdyn::SuiteOptions options;
      options.level = level == "full" ? rpsdyn::VerifyLevel::kFull : rpsdyn::VerifyLevel::kQuick;
      if (!fault.empty()) options.inject_fault = fault;
      if (flags.seed) options.seed = *flags.seed;
      rpsdyn::AcceptanceSuite suite(options);
      bool all = true;
      rpsdyn::Json report = rpsdyn::Json::array();
      for (const auto& r : suite.RunAll()) {
        std::cout << r.Line() << '\n';
        all = all && r.pass;
        report.push_back(r.ToJson());
      }
      if (!flags.out.empty()) {
        rpsdyn::WriteTextFile(std::filesystem::path(flags.out) / "verify_report.json",
                              rpsdyn::Json{{"level", level}, {"criteria", report}}.dump(2) + "\n");
      }
      return all ? kExitOk : kExitVerification;
    }
    if (*preset_list) {
      for (const auto& p : rpsdyn::Presets()) std::cout << p.id << "  " << p.description << '\n';
      return kExitOk;
    }
    if (*preset_run) {
      const rpsdyn::FigurePreset& p = rpsdyn::FindPreset(preset_id);
      return p.spec.sweep.empty() ? RunSingle(p.spec, flags) : RunSweepCommand(p.spec, flags);
    }
  } catch (const rpsdyn::Error& e) {
    std::cerr << "rpsdyn: " << e.what() << '\n';
    return e.code() == rpsdyn::ErrorCode::kIoError ? kExitIo : kExitConfig;
  }
  return kExitConfig;
}
