#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "harmonics/error.hpp"

namespace harmonics::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kConvergenceCap = 4,
  kAcceptance = 5,
  kNumerical = 6,
};

ExitCode exit_code_for(ErrorKind kind);

/// Parses `args` (args[0] is the program name) and runs the chosen
/// subcommand. All diagnostics go to `err`, progress and summaries to `out`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace harmonics::cli
