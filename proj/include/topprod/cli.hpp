#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace topprod {

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotApplicable = 3;

// Runs the command line tool on `args` (without the program name). Reports go
// to `out` as JSON, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace topprod
