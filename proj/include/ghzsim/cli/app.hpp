#pragma once

#include <ostream>

namespace ghzsim::cli {

// Parses argv (argv[0] is the program name), runs the subcommand and returns
// the process exit code: 0 ok, 2 validation, 3 numerical failure, 4 I/O.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ghzsim::cli
