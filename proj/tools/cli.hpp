#pragma once

#include <ostream>

namespace broadbid::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadInput = 2;
inline constexpr int kSolverFailure = 3;
inline constexpr int kSizeLimit = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace broadbid::cli
