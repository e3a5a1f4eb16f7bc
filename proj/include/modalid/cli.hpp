#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modalid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

/// Runs the `modalid` command line. `args` excludes the program name.
/// Evaluation parallelism is read from MODALID_THREADS (0 or unset = serial).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modalid::cli
