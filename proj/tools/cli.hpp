#pragma once

#include <iosfwd>

namespace pirlab {

/// Runs one pirlab command line. Returns the process exit status:
/// 0 success, 1 failed audit or recovery, 2 bad input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pirlab
