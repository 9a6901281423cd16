#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oslk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 4;

/// Runs the `oslk` command line. `args` excludes the program name. Human
/// readable summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oslk::cli
