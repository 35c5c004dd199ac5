#pragma once

#include <string>

#include <json.hpp>

#include "ftz/config.hpp"

namespace ftz {

enum class Command { transform, toeplitz, decompose, bounds, schatten, carleson, selftest };

const char* command_name(Command c);
/// Throws ConfigError for unknown names.
Command parse_command(const std::string& name);

struct RunOutcome {
  int exit_code = 0;  // 0 all assertions passed, 1 otherwise
  nlohmann::json report;
};

/// Runs one experiment, writing <command>.json and its CSV tables into
/// out_dir. Throws ConfigError / IoError / std::invalid_argument for bad
/// inputs; failed assertions are reported in-band.
RunOutcome run(Command command, const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace ftz
