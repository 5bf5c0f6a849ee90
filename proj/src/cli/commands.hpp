#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levy::cli {

// Exit codes: 0 success, 1 runtime failure, 2 configuration or flag error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levy::cli
