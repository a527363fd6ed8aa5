#pragma once

#include <iosfwd>

namespace rezeta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and dispatches to one subcommand:
///   sigma0 | prime-zeta | scan | certify | mc | table
/// Results go to `out` (or --output), diagnostics to `err`.
/// REZETA_THREADS and REZETA_CHECKPOINT_DIR override the thread count and
/// the directory for relative checkpoint paths.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rezeta::cli
