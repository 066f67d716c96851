// Scenario runner: `implicate run <config>`, `implicate list`,
// `implicate lattice-demo`.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "implicate/error.hpp"
#include "implicate/scenario.hpp"

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

int report_and_exit(const implicate::RunReport& report, bool quiet) {
  if (!quiet) implicate::write_report_text(std::cout, report);
  return report.passed() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic quantum mechanics scenario runner"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Directory for artifacts (overrides the config)");
  app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_flag("--quiet,-q", quiet, "Print nothing but errors");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the scenario described by a JSON config");
  run->add_option("config", config_path, "Path to the config file")->required();
  auto* list = app.add_subcommand("list", "List the available scenarios");
  auto* lattice = app.add_subcommand("lattice-demo", "Projection-lattice demo with a JSON summary");

  CLI11_PARSE(app, argc, argv);

  implicate::RunOptions options;
  if (output_dir) options.output_dir = std::filesystem::path(*output_dir);
  options.seed = seed;

  try {
    if (list->parsed()) {
      for (const auto& s : implicate::list_scenarios()) {
        std::cout << s.name << std::string(18 - s.name.size(), ' ') << s.description << '\n';
      }
      return kPass;
    }
    if (lattice->parsed()) {
      auto config = implicate::default_config(implicate::ScenarioKind::lattice_demo);
      const auto report = implicate::run_scenario(config, options);
      const int code = report_and_exit(report, quiet);
      if (!quiet) {
        const auto dir = options.output_dir ? *options.output_dir : config.output_dir;
        std::ifstream json(dir / "lattice.json");
        std::cout << json.rdbuf();
      }
      return code;
    }
    const auto config = implicate::load_config(config_path);
    return report_and_exit(implicate::run_scenario(config, options), quiet);
  } catch (const implicate::Error& e) {
    std::cerr << "error (" << implicate::to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == implicate::Errc::config ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
