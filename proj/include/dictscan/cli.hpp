#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dictscan {

enum ExitCode : int { kExitOk = 0, kExitPageFailures = 1, kExitUsage = 2 };

/// Entry point of the dictscan command line (extract, build-lexicon,
/// correct, evaluate). argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace dictscan
