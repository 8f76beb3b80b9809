#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "sweep.hpp"

namespace lab {

struct RunContext {
  unsigned jobs = 1;
};

struct CommandOutput {
  Table table;
  nlohmann::ordered_json metadata;  // config echo, tolerances, fitted values
  std::vector<PointFailure> failures;
  std::size_t requested_points = 0;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::function<CommandOutput(const RunContext&)> run;
};

// Registers every subcommand on `root`; option storage lives in the returned objects.
std::vector<std::shared_ptr<Command>> register_commands(CLI::App& root);

}  // namespace lab
