#include <iostream>
#include <thread>

#include "commands.hpp"
#include "ctfim/errors.hpp"
#include "ctfim/version.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kUnsupported = 4;

int exit_code_for(const std::string& category) {
  if (category == "config") return kConfigError;
  if (category == "unsupported") return kUnsupported;
  return kNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctfim-lab: free-fermion and channel calculations for the dissipative Ising chain.\n"
               "Ranges are start:stop:step with the stop excluded; lists are comma separated.\n"
               "Outputs go to --out-dir, else $CTFIM_LAB_OUTPUT_DIR, else the working directory.\n"
               "Exit codes: 2 config error, 3 numerical failure, 4 unsupported configuration."};
  app.set_version_flag("--version", ctfim::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  std::string out_dir, stem;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--name", stem, "Output file stem (default: the subcommand name)");
  app.add_option("--jobs", jobs, "Worker threads for sweep points")->check(CLI::PositiveNumber)->capture_default_str();
  const auto commands = lab::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  for (const auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;
    try {
      auto result = cmd->run(lab::RunContext{jobs});
      nlohmann::ordered_json meta;
      meta["command"] = cmd->name;
      meta.update(result.metadata);
      meta["requested_points"] = result.requested_points;
      nlohmann::ordered_json failures = nlohmann::ordered_json::array();
      for (const auto& f : result.failures)
        failures.push_back({{"index", f.index}, {"category", f.category}, {"message", f.message}});
      meta["failures"] = failures;
      const auto path = lab::write_outputs(lab::resolve_output_dir(out_dir), stem.empty() ? cmd->name : stem,
                                           result.table, meta);
      std::cout << path.string() << '\n';
      for (const auto& f : result.failures) std::cerr << "point " << f.index << " failed: " << f.message << '\n';
      if (result.table.rows.empty() && !result.failures.empty()) return exit_code_for(result.failures.front().category);
      return 0;
    } catch (const ctfim::InvalidParameter& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kConfigError;
    } catch (const ctfim::UnsupportedConfiguration& e) {
      std::cerr << "unsupported configuration: " << e.what() << '\n';
      return kUnsupported;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return kNumericalFailure;
    }
  }
  return kConfigError;
}
