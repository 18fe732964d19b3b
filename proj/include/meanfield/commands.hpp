#pragma once

#include <string>
#include <vector>

#include "meanfield/config.hpp"

namespace meanfield::cli {

// Exit code contract: 0 success/pass, 1 condition or validation fail,
// 2 indeterminate, 3 runtime blow-up, 4 config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConditionFail = 1;
inline constexpr int kExitIndeterminate = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitConfigError = 4;

struct CommandResult {
  int exit_code = kExitOk;
  std::string summary_json;           // stable key order
  std::vector<std::string> files;     // artifacts written
};

CommandResult cmd_fbm(const Config& cfg);
CommandResult cmd_check(const Config& cfg);
CommandResult cmd_simulate(const Config& cfg);
CommandResult cmd_diagnose(const Config& cfg);

/// Dispatch by subcommand name; maps exceptions onto the exit-code contract.
CommandResult run_command(const std::string& name, const Config& cfg);

}  // namespace meanfield::cli
