#pragma once

#include <ostream>

namespace lmprint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `lmprint` tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmprint::cli
