#pragma once

#include <ostream>

namespace netduopoly {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;         // validation, parse or I/O failure
inline constexpr int kExitNotConverged = 2;  // `ne`/`report` ran out of iterations
inline constexpr int kExitNotNe = 3;         // `ne --verify` rejected the profile

// Output directory override for relative --out paths.
inline constexpr const char* kOutputDirEnv = "NETDUOPOLY_OUTPUT_DIR";

/// Entry point behind the `netduopoly` executable. Results go to `out`
/// unless --out is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace netduopoly
