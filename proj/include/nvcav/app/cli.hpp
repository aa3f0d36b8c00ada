#pragma once

#include <iosfwd>

namespace nvcav::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // ConfigError and usage errors
inline constexpr int kExitSolver = 3;  // any library error
inline constexpr int kExitIo = 4;      // IoError and SchemaMismatch

/// Entry point of the `nvcav` tool. Subcommands: steady, sweep-green,
/// sweep-grid, xsection, fit-peaks, plot. Failures print one line
/// `error code=<Code> message="..."` to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvcav::app
