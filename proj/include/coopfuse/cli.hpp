#pragma once

#include <iosfwd>

namespace coopfuse {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Entry point of the coopfuse tool. Progress goes to `out`, diagnostics to
// `err`; all data is written to files under --out.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coopfuse
