#pragma once

#include <iosfwd>

namespace poleswap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitVerification = 3;

/// Entry point shared by the binary and the tests. Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poleswap::cli
