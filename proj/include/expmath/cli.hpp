#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expmath::cli {

/// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

/// Environment variable consulted for --digits when the flag is absent.
constexpr const char* kDigitsEnv = "EXPMATH_DIGITS";

/// Runs one command line (without the program name). Results go to `out`
/// (or the --output file), diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expmath::cli
