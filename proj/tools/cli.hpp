#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moore::cli {

/// Exit codes shared by both tools.
enum ExitCode : int {
    success = 0,
    negative = 1,      // not equivalent / not isomorphic
    usage_error = 2,   // bad arguments, unreadable or malformed input
    domain_error = 3,  // an operation's precondition failed
};

/// `moore <subcommand> ...`; `args` excludes the program name.
int run_moore(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `subst <subcommand> ...`; `args` excludes the program name.
int run_subst(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on the basename of argv[0] ("moore" or "subst"), or on argv[1]
/// when the program has another name.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace moore::cli
