#pragma once

#include <ostream>

namespace heatkern::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitInvariant = 4;

/// Entry point of the `heatkern` tool: subcommands eval, projector,
/// envelope-scan and selftest. Results go to `out`; failures print a
/// one-line {"error": ...} record to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heatkern::cli
