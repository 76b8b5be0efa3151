#pragma once

#include <iosfwd>

namespace cesaro::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiscordant = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNumeric = 70;

/// Default directory for relative --out paths.
inline constexpr const char* kOutDirEnv = "CESARO_OUT_DIR";

/// Parses argv (argv[0] is the program name), runs the subcommand and returns
/// the exit code. Results go to `out` unless --out names a file; diagnostics
/// go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cesaro::cli
