#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cncfl::cli {

enum ExitCode : int {
  kOk = 0,
  kNotConvex = 1,
  kParseError = 2,
  kConvexityViolation = 3,
  kInvalidParameters = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Subcommands: generate, denoise, sweep, check-convexity.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cncfl::cli
