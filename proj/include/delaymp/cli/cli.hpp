#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace delaymp::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsageError = 2 };

/// Entry point of the `delaymp` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace delaymp::cli
