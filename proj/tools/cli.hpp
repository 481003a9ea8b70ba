#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wfresil::cli {

// Exit codes.
inline constexpr int kYes = 0;
inline constexpr int kNo = 1;
inline constexpr int kUsage = 2;
inline constexpr int kRuntime = 3;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wfresil::cli
