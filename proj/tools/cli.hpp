#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sketchlab::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { ok = 0, internal_error = 1, config_error = 2, infeasible = 3 };

/// Runs one command. `args` excludes the program name. CSV goes to `out`
/// (or the --output file), the one-line summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sketchlab::cli
