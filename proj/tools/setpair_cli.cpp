#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "setpair/experiment.hpp"

namespace {

setpair::json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw setpair::InputError("cannot open config file: " + path);
  setpair::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw setpair::InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::optional<std::uint64_t>& seed, const char* expected_kind) {
  setpair::json j = load_config(config_path);
  if (seed) j["seed"] = *seed;
  setpair::ExperimentConfig cfg = setpair::config_from_json(j);

  const char* actual =
      std::holds_alternative<setpair::RunSpec>(cfg.experiment)          ? "run"
      : std::holds_alternative<setpair::RegularizeSpec>(cfg.experiment) ? "run"
      : std::holds_alternative<setpair::StabilitySpec>(cfg.experiment)  ? "run"
      : std::holds_alternative<setpair::ProbeSpec>(cfg.experiment)      ? "probe"
                                                                        : "verify";
  if (std::string(actual) != expected_kind) {
    throw setpair::InputError(std::string("config experiment kind does not match the '") +
                              expected_kind + "' subcommand");
  }

  setpair::RunOutputs out = setpair::run_experiment(cfg);
  setpair::write_outputs(out, out_dir);
  if (!out.all_passed) {
    if (out.report.contains("failed")) {
      std::cerr << "failed suites:";
      for (const auto& name : out.report.at("failed")) {
        std::cerr << ' ' << name.get<std::string>();
      }
      std::cerr << '\n';
    } else {
      std::cerr << "some trials violated their asserted bounds\n";
    }
    return 1;
  }
  std::cout << "report written to " << out_dir << "/report.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Successive approximations for two-map set-valued dynamics"};
  app.require_subcommand(0, 1);

  bool list_suites = false;
  app.add_flag("--list-suites", list_suites, "List verification suite names and exit");

  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Path to the JSON experiment config")->required();
    sub->add_option("--out", out_dir, "Output directory for report files");
    sub->add_option("--seed", seed, "Seed override (takes precedence over the config)");
  };

  CLI::App* run = app.add_subcommand("run", "Execute a run/regularize/stability experiment");
  CLI::App* verify = app.add_subcommand("verify", "Execute batch verification suites");
  CLI::App* probe = app.add_subcommand("probe", "Execute the genericity probe");
  add_common(run);
  add_common(verify);
  add_common(probe);

  CLI11_PARSE(app, argc, argv);

  if (list_suites) {
    for (const auto& name : setpair::suite_names()) std::cout << name << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    const char* kind = run->parsed() ? "run" : probe->parsed() ? "probe" : "verify";
    return run_command(config_path, out_dir, seed, kind);
  } catch (const setpair::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
