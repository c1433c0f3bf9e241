#pragma once

#include <ostream>
#include <span>
#include <string>

namespace backlog::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitDomain = 1,
    kExitAccuracy = 2,
    kExitUsage = 3,
    kExitVerificationFailed = 4,
};

/// Runs one subcommand. `args` excludes the program name. Data goes to `out`
/// (or the --out file), diagnostics to `err`; nothing is written to the data
/// sink unless the whole pipeline succeeds.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace backlog::cli
