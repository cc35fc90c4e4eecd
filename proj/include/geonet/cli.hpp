#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geonet::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
};

// Entry point shared by the executable and the tests. args[0] is the program
// name. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses flat `key=value` config text (`#` starts a comment). Throws
// io::ParseError on a line without '='.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);

}  // namespace geonet::cli
