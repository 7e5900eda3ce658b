#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace otsense::cli {

/// Runs one command line (args excludes the program name). Returns the exit
/// status: 0 success, 1 usage error, 2 data or I/O error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace otsense::cli
