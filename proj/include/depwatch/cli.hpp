#pragma once

/**
 * @file cli.hpp
 * @brief Entry point of the `depwatch` command-line tool.
 *
 * Exit codes: 0 success or clean, 1 findings, 2 operational error.
 */

#include <iosfwd>
#include <string>
#include <vector>

namespace depwatch::cli {

enum ExitCode : int { kExitOk = 0, kExitFindings = 1, kExitError = 2 };

/// Default for every --seed flag.
inline constexpr unsigned long long kDefaultSeed = 20200112ULL;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace depwatch::cli
