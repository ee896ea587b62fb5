#pragma once

#include <string>
#include <vector>

namespace beamtraffic {

// Exit codes: 0 success, 1 input or usage error, 2 internal invariant violation.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args[0] is the program name

// Parses "a..b" (inclusive) or a comma list; throws InvalidArgument.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace beamtraffic
