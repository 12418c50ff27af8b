#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace irrsde::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kIoError = 3,
    kOverflow = 4,
    kSelfCheckFailed = 5,
};

/// Runs `irrsde <subcommand> [flags]`. args excludes the program name.
/// Artifacts go to --out or to `out`; diagnostics and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irrsde::cli
