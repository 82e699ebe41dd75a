#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fgw::cli
{

enum ExitCode : int { Success = 0, VerdictFailure = 1, UsageError = 2 };

// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fgw::cli
