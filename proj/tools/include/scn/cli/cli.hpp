#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scn::cli {

/// Exit codes besides the verdict codes 0, 1 and 2.
inline constexpr int kExitDomainError = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitIo = 74;

/// Runs one command line (without the program name). The summary JSON goes to
/// `out`, usage messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scn::cli
