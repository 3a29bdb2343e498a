#pragma once

// Command-line front end: JSON run configuration, the four workflows
// (eval, converge, optimize, scan), and CSV/JSON report emission.

#include <iosfwd>

namespace imspekit {

/// Parses flags and the JSON config, runs the requested command, and writes
/// the report to `out` (or to the --out path). Returns the process exit
/// code: 0 on success, 2 on configuration errors, 3 on numerical errors.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace imspekit
