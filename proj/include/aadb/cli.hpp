#pragma once
// Command-line driver. Every subcommand is a thin composition of library
// calls; runCli is the whole program minus argv decoding so tests can drive
// it in-process. Exit codes: 0 success, 1 usage error, 2 runtime/backend
// failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace aadb {

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aadb
