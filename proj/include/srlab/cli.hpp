#pragma once

#include <ostream>

namespace srlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Command-line entry point. Diagnostics go to `err`; artifacts go to files
/// under the output directory only.
int run_cli(int argc, const char* const* argv, std::ostream& err);

}  // namespace srlab
