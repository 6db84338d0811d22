#pragma once

#include <iosfwd>

namespace frontlab::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kConfig = 1, kNumeric = 2, kBracket = 3 };

/// Parses arguments and runs one subcommand. Reports go to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frontlab::cli
