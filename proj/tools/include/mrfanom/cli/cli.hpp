#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrfanom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;  // numerical failures
inline constexpr int kExitUsage = 2;    // bad arguments, configs or inputs

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrfanom::cli
