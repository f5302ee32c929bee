#pragma once

#include <iosfwd>
#include <string_view>

#include "ebcommit/qmat.hpp"

namespace ebc::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRejected = 2;

/// Entry point of the `ebcommit` tool; tables go to `out` (or --output), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Qubit state from a flag value: "0", "1", "+", "-", "+i", "-i" or "THETA,PHI" Bloch angles.
StateVector parse_qubit_state(std::string_view text);

}  // namespace ebc::cli
