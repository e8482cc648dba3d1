#pragma once

#include <iosfwd>

namespace fuzzynet::cli {

/// Runs one command line (argv[0] is the program name). Tables go to out,
/// logs and errors to err. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fuzzynet::cli
