#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace i3322 {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitInputError = 2;

// args excludes the program name. Output goes only to `out` / `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace i3322
