#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sprt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitIo = 3;

inline constexpr int kSchemaVersion = 1;

// Runs `sprt_coherent <args...>`; args excludes the program name.
// Subcommands: closed-form, optimize, simulate, unambiguous, replay.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fixed-width decimal used by every CSV writer (15 significant digits).
std::string format_number(double x);

}  // namespace sprt::cli
