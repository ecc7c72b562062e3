#pragma once

#include <iosfwd>

namespace framekit::cli {

enum ExitCode : int { ok = 0, property_failed = 1, usage_error = 2, degenerate = 3 };

/// Runs one command line. Reports go to `out` (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace framekit::cli
