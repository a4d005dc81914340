// Co-transportation simulator command line:
//   cocarry run <scenario> [--out DIR] [--seed N] [--controller C] [--dt S]
//   cocarry compare <scenario> [--out DIR] [--seed N] [--dt S]
//   cocarry validate <scenario>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "cocarry/metrics.hpp"
#include "cocarry/scenario_io.hpp"
#include "cocarry/sim.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cocarry;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIncomplete = 3;

struct Options {
  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> controller;
  std::optional<double> dt;
};

ScenarioConfig load(const Options& opt) {
  ScenarioConfig config = parse_scenario(opt.scenario);
  if (opt.seed) {
    config.seed = *opt.seed;
  }
  if (opt.dt) {
    config.dt = *opt.dt;
    config.validate();
  }
  if (opt.controller) {
    if (*opt.controller == "aci") {
      config.controller = ControllerMode::aci;
    } else if (*opt.controller == "admittance" || *opt.controller == "admittance_only") {
      config.controller = ControllerMode::admittance_only;
    } else {
      throw ConfigError("--controller must be 'aci' or 'admittance'");
    }
  }
  return config;
}

void write_run_outputs(const SimLog& log, const fs::path& dir) {
  fs::create_directories(dir);
  const IntervalReport report = interval_stats(log);
  atomic_write_file(dir / ("log_" + log.controller + ".csv"), log_to_csv(log));
  atomic_write_file(dir / ("summary_" + log.controller + ".txt"), report_to_text(report));
  atomic_write_file(dir / ("intervals_" + log.controller + ".csv"), report_to_csv(report));
}

int cmd_run(const Options& opt) {
  const ScenarioConfig config = load(opt);
  const SimLog log = run_scenario(config);
  write_run_outputs(log, opt.out_dir);
  std::cout << "controller=" << log.controller
            << " completed=" << (log.completed ? "yes" : "no")
            << " t_c=" << log.completion_time << "s"
            << " D_AM=" << alignment_metric(log) << "m\n";
  return log.completed ? kExitOk : kExitIncomplete;
}

int cmd_compare(const Options& opt) {
  ScenarioConfig config = load(opt);

  config.controller = ControllerMode::aci;
  const SimLog log_aci = run_scenario(config);
  config.controller = ControllerMode::admittance_only;
  const SimLog log_adm = run_scenario(config);

  const fs::path dir = opt.out_dir;
  write_run_outputs(log_aci, dir);
  write_run_outputs(log_adm, dir);
  const ComparisonSummary cmp =
      compare_controllers(interval_stats(log_aci), interval_stats(log_adm));
  atomic_write_file(dir / "comparison.txt", comparison_to_text(cmp));

  std::cout << "aci: completed=" << (log_aci.completed ? "yes" : "no")
            << " t_c=" << log_aci.completion_time << "s\n";
  std::cout << "admittance_only: completed=" << (log_adm.completed ? "yes" : "no")
            << " t_c=" << log_adm.completion_time << "s\n";
  std::cout << "d_t_c=" << cmp.d_completion_time << "s d_D_AM=" << cmp.d_alignment << "m\n";
  return log_aci.completed && log_adm.completed ? kExitOk : kExitIncomplete;
}

int cmd_validate(const Options& opt) {
  parse_scenario(opt.scenario);
  std::cout << "ok: " << opt.scenario << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic human-robot co-transportation simulator"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* cmd, bool with_outputs) {
    cmd->add_option("scenario", opt.scenario, "scenario file")->required();
    if (with_outputs) {
      cmd->add_option("--out", opt.out_dir, "output directory");
      cmd->add_option_function<std::uint64_t>(
          "--seed", [&opt](const std::uint64_t& v) { opt.seed = v; }, "seed override");
      cmd->add_option_function<double>(
          "--dt", [&opt](const double& v) { opt.dt = v; }, "control period override [s]");
    }
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario, write log and summary");
  add_common(run, true);
  run->add_option_function<std::string>(
      "--controller", [&opt](const std::string& v) { opt.controller = v; },
      "controller override: aci or admittance");

  CLI::App* compare =
      app.add_subcommand("compare", "run both controllers with shared seeds and compare");
  add_common(compare, true);

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario file");
  add_common(validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(opt);
    }
    if (compare->parsed()) {
      return cmd_compare(opt);
    }
    if (validate->parsed()) {
      return cmd_validate(opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
