#pragma once

#include <exception>
#include <ostream>

namespace wls::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_domain = 2,
    exit_consistency = 3,
    exit_convergence = 4,
};

// Exit code for an exception escaping a subcommand.
ExitCode exit_code_for(const std::exception& e);

// Entry point of the `wls` tool; output goes to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wls::cli
