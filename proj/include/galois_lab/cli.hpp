#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace galois_lab {

// Exit codes of the command-line tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace galois_lab
