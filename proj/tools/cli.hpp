#pragma once

#include <iosfwd>

namespace gresilience::cli {

// Exit codes: 0 success, 2 usage or validation error, 3 internal invariant
// breach.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

// Entry point of the `gresilience` tool. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gresilience::cli
