#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lcc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Runs `lcc <subcommand> ...`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcc::cli
