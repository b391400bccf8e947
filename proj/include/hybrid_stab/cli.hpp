#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybrid_stab::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Runs one command (simulate, figures, verify, sweep, theta-star).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybrid_stab::cli
