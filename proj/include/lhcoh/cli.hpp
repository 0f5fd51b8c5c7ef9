#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lhcoh {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitClean = 0, kExitUsage = 2, kExitConfig = 3, kExitPartial = 4 };

/// Entry point of the `lhcoh` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1:32", "4", "1,2,4", "2:32:2" or combinations joined by commas.
std::vector<std::size_t> parse_index_list(const std::string& text);

} // namespace lhcoh
