#pragma once

#include <iosfwd>

namespace depreg::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `depreg` tool. Returns the process exit code:
/// 0 success, 2 bad input or I/O failure, 3 numerical or pipeline failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depreg::app
